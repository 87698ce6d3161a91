import sys

from cli.app import run_command


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
