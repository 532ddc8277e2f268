import logging

import pytest

from profilematch.profiles import ProfileRecord, ReferenceData

logging.getLogger("profilematch").setLevel(logging.ERROR)


def make_record(rec_id="u1", network="S1", full_name="john smith", **kwargs):
    return ProfileRecord(id=rec_id, network=network, full_name=full_name, **kwargs)


@pytest.fixture
def ref():
    return ReferenceData(
        name_frequency={"john smith": 17204, "jane doe": 120},
        gazetteer={
            "berlin": (52.52, 13.41),
            "hamburg": (53.55, 9.99),
            "equator zero": (0.0, 0.0),
            "equator one": (0.0, 1.0),
        },
    )


@pytest.fixture
def empty_ref():
    return ReferenceData(name_frequency={}, gazetteer={})
