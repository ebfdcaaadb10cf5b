import re


def slugify(s: str) -> str:
    """Lowercase token safe for directory names; rate syntax like "1/32*x^-2" becomes "1-32-x-2"."""
    s = s.lower().strip()
    s = re.sub(r"[*^/:.\s_]+", "-", s)
    s = re.sub(r"[^a-z0-9-]", "", s)
    s = re.sub(r"-{2,}", "-", s)
    return s.strip("-")


def run_slug(kind: str | None, rate: str | None, depth: int, seed: int) -> str:
    return slugify(f"{kind or 'run'} {rate or 'no-rate'} d{depth} s{seed}")
