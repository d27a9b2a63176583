import sys

from cli import run_command


def run():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    run()
