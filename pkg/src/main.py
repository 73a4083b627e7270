"""
main.py

Entry point of the `chasekit` command line.
"""
import sys

from cli.runner import run_cli


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
