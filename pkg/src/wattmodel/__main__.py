"""Allow `python -m wattmodel`."""

from .cli import entrypoint

entrypoint()
