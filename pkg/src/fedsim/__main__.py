"""Entrypoint: ``python -m fedsim``."""

from fedsim.cli.main import run

if __name__ == "__main__":
    run()
