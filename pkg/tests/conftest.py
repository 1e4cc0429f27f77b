import pytest

from hatfam.configfile import load_text
from hatfam.geometry import tile_from_config
from hatfam.substitution import layout_from_config
from hatfam.supervectors import hat_params


@pytest.fixture(scope="session")
def tile():
    return tile_from_config(load_text("tile.cfg"))


@pytest.fixture(scope="session")
def layout(tile):
    return layout_from_config(load_text("layout.cfg"), tile)


@pytest.fixture(scope="session")
def hat_p():
    return hat_params()
