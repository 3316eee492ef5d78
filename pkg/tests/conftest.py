"""Shared builders for randomized algebra elements.

Tests that need reproducible corpora construct their own seeded Random;
the helpers here only turn draws into Words and Elements.
"""

from fractions import Fraction
from random import Random

from wmfock.expr import Element


def random_word_z(rng: Random, max_len: int = 4, lo: int = -3, hi: int = 3):
    n = rng.randint(1, max_len)
    return tuple((rng.randint(lo, hi), rng.random() < 0.5) for _ in range(n))


def random_word_n(rng: Random, max_len: int = 4, hi: int = 3):
    n = rng.randint(1, max_len)
    return tuple((rng.randint(1, hi), rng.random() < 0.5) for _ in range(n))


def random_scalar(rng: Random):
    # small exact rationals keep every downstream check on the exact path
    return Fraction(rng.randint(-3, 3), rng.randint(1, 3))


def random_element_z(rng: Random, max_words: int = 3, max_len: int = 3,
                     lo: int = -3, hi: int = 3, with_unit: bool = True) -> Element:
    e = Element.zero("Z")
    if with_unit and rng.random() < 0.5:
        e = e + Element.one("Z") * Fraction(rng.randint(-2, 2))
    for _ in range(rng.randint(1, max_words)):
        c = random_scalar(rng)
        if c:
            e = e + Element.word("Z", random_word_z(rng, max_len, lo, hi)) * c
    return e


def random_element_n(rng: Random, max_words: int = 3, max_len: int = 3,
                     hi: int = 3, with_unit: bool = True) -> Element:
    e = Element.zero("N")
    if with_unit and rng.random() < 0.5:
        e = e + Element.one("N") * Fraction(rng.randint(-2, 2))
    for _ in range(rng.randint(1, max_words)):
        c = random_scalar(rng)
        if c:
            e = e + Element.word("N", random_word_n(rng, max_len, hi)) * c
    return e


def random_element_anti(rng: Random, max_words: int = 3, max_len: int = 3,
                        hi: int = 4) -> Element:
    e = Element.zero("ANTI")
    for _ in range(rng.randint(1, max_words)):
        c = random_scalar(rng)
        w = tuple((rng.randint(1, hi), rng.random() < 0.5)
                  for _ in range(rng.randint(1, max_len)))
        if c:
            e = e + Element.word("ANTI", w) * c
    return e
