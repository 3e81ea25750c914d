"""Input validation and sanitization utilities."""

import re
from typing import Optional

from sympy import isprime

from .errors import ValidationError

_SELECTOR_PATTERN = re.compile(r"^[a-z0-9*?\[\]][a-z0-9.\-*?\[\]]*$")


def validate_prime(p: int, field: str = "p") -> int:
    """Validate that ``p`` is a prime integer."""
    if isinstance(p, bool) or not isinstance(p, int):
        raise ValidationError(f"{field} must be an integer", field=field, value=p)
    if not isprime(p):
        raise ValidationError(f"{field}={p} is not prime", field=field, value=p)
    return p


def validate_positive(value: int, field: str, minimum: int = 1) -> int:
    """Validate an integer parameter against a lower bound."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{field} must be an integer", field=field, value=value)
    if value < minimum:
        raise ValidationError(
            f"{field} must be at least {minimum}, got {value}",
            field=field,
            value=value
        )
    return value


def validate_check_selector(selector: Optional[str]) -> str:
    """Validate a check id or glob pattern."""
    if not selector:
        return "*"

    selector = selector.strip().lower()

    if len(selector) > 120:
        raise ValidationError(
            "Check selector must be less than 120 characters",
            field="selector",
            value=selector
        )

    # Allowed: lowercase letters, digits, dots, hyphens and glob wildcards
    if not _SELECTOR_PATTERN.match(selector):
        raise ValidationError(
            "Check selector contains invalid characters. "
            "Allowed: a-z, 0-9, '.', '-', and the glob wildcards '*', '?', '[ ]'",
            field="selector",
            value=selector
        )

    return selector


def sanitize_filename(filename: str, max_length: int = 200) -> str:
    """Sanitize filename to be filesystem-safe."""
    filename = filename.replace('/', '_').replace('\\', '_')
    filename = re.sub(r'[<>:"|?*]', '', filename)
    filename = re.sub(r'[\s_]+', '_', filename)
    filename = filename.strip('._')

    if len(filename) > max_length:
        filename = filename[:max_length]

    if not filename:
        filename = "unnamed"

    return filename
