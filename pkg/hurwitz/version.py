import subprocess
from importlib import metadata

PACKAGE_NAME = "hurwitz-lab"


def package_version() -> str:
    try:
        return metadata.version(PACKAGE_NAME)
    except metadata.PackageNotFoundError:
        return "0.0.0"


def get_version_commit() -> str:
    """Short commit of the working tree, suffixed with "-dirty" when it has local edits."""
    try:
        described = subprocess.check_output(
            ["git", "describe", "--always", "--dirty", "--abbrev=8"],
            stderr=subprocess.DEVNULL,
        )
    except Exception:
        return "dev"
    return described.decode().strip() or "dev"
