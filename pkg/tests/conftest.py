import random

import pytest

from autgrp import zoo
from autgrp.element import generator_elements, product


@pytest.fixture(scope="session")
def grig():
    return zoo.grigorchuk()


@pytest.fixture(scope="session")
def gs():
    return zoo.gupta_sidki()


@pytest.fixture(scope="session")
def bsv():
    return zoo.bsv()


@pytest.fixture(scope="session")
def sush():
    return zoo.sushchanskyy()


@pytest.fixture(scope="session")
def G(grig):
    """Grigorchuk generators as elements, keyed by state name."""
    return generator_elements(grig)


def random_word(rng: random.Random, letters, max_len: int) -> list:
    return [rng.choice(letters) for _ in range(rng.randint(0, max_len))]


def random_element(rng, machine, letters, max_len):
    gens = generator_elements(machine)
    return product([gens[q] for q in random_word(rng, letters, max_len)], machine.p)
