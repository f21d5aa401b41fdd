from tormpc.cli import run

run()
