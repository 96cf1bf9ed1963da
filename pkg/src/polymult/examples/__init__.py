"""Bundled example systems (JSON input files)."""

from importlib import resources

NAMES = ("interval", "interval2", "triangle", "point", "skew", "diagonal")


def path(name: str):
    """Filesystem path of the bundled system ``name``."""
    return resources.files(__name__).joinpath(f"{name}.json")


def load(name: str):
    from ..geometry import load_system

    return load_system(path(name))
