from linspp.cli import run

run()
