import random

import pytest

from bigmul.words import ScratchArena, set_word_bits, using_word_bits


@pytest.fixture(autouse=True)
def _default_word_size():
    # every test starts from the 64-bit build unless it switches explicitly
    set_word_bits(64)
    yield
    set_word_bits(64)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def arena():
    return ScratchArena()


@pytest.fixture
def small_words():
    with using_word_bits(8):
        yield 8
