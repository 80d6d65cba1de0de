import pytest
from hypothesis import settings

import rankgames as rg

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def exposure_example():
    return rg.example_game()


@pytest.fixture
def action_example():
    return rg.example_game(rg.ACTION)


@pytest.fixture
def residual_game():
    # three authors, two equally weighted topics, author qualities
    # (0.3, 0.4), (0.5, 0.7), (0.1, 0.4)
    return rg.make_game(
        ("1/2", "1/2"),
        (("0.3", "0.4"), ("0.5", "0.7"), ("0.1", "0.4")),
        rg.PRP,
    )


@pytest.fixture
def residual_game_action(residual_game):
    return rg.make_game(
        residual_game.demand, residual_game.quality, rg.PRP, rg.ACTION
    )
