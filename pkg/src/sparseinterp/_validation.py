"""Small argument-checking helpers."""

import numbers
import random


def check_random_state(seed):
    """Turn ``seed`` into a ``random.Random`` instance.

    ``None`` gives a fixed default stream so that library calls stay
    reproducible; an int seeds a fresh generator; an existing generator is
    passed through unchanged.
    """
    if isinstance(seed, random.Random):
        return seed
    if seed is None:
        return random.Random(0)
    if isinstance(seed, numbers.Integral) and not isinstance(seed, bool):
        return random.Random(int(seed))
    raise ValueError(f"{seed!r} cannot be used to seed a random.Random instance")


def spawn(rng):
    """Independent child generator drawn from ``rng``."""
    return random.Random(rng.getrandbits(64))


def check_int(value, name, minimum=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be at least {minimum}, got {value}")
    return value


def check_probability(eps, name="eps"):
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {eps}")
    return eps
