from fractions import Fraction

import pytest

from gapped_persistence.contact import ContactEnvelope
from gapped_persistence.exact import Field
from gapped_persistence.gapped import GappedSequence
from gapped_persistence.persistence import barcode
from gapped_persistence.random_modules import random_persistence_module
from gapped_persistence.s2 import S2FixtureSpec, build_s2_fixture
from gapped_persistence.serialization import (SchemaError, barcode_from_json, barcode_to_json,
                                              dumps, envelope_from_json, envelope_to_json,
                                              gapped_from_json, gapped_to_json, loads,
                                              module_from_json, module_to_json,
                                              sequence_from_json, sequence_to_json)


@pytest.mark.parametrize("field", [Field.GF2, Field.Q])
def test_module_round_trip(rng, field):
    for _ in range(20):
        pm = random_persistence_module(rng, int(rng.integers(1, 6)), 3, field)
        doc = loads(dumps(module_to_json(pm)))
        assert module_from_json(doc) == pm


def test_q_entries_are_strings(rng):
    pm = random_persistence_module(rng, 3, 2, Field.Q, colimit_dim=2)
    doc = module_to_json(pm)
    assert all(isinstance(x, str) for m in doc["colimit_maps"] for row in m for x in row)
    assert all(isinstance(x, str) for x in doc["grid"])


def test_gapped_round_trip():
    gm = build_s2_fixture(S2FixtureSpec(), 6)
    back = gapped_from_json(loads(dumps(gapped_to_json(gm))))
    assert gapped_to_json(back) == gapped_to_json(gm)
    assert back.maps == gm.maps and back.unit == "2pi"


def test_barcode_round_trip(rng):
    bc = barcode(random_persistence_module(rng, 5, 3))
    assert barcode_from_json(loads(dumps(barcode_to_json(bc)))) == bc


def test_sequence_and_envelope_round_trip():
    seq = GappedSequence((Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2)), 1, 1)
    assert sequence_from_json(sequence_to_json(seq)) == seq
    h = ContactEnvelope((0, Fraction(1, 3), 1), (2, 1), (0, Fraction(-1, 2)), (Fraction(1, 7),))
    assert envelope_from_json(envelope_to_json(h)) == h


def test_output_is_canonical(rng):
    pm = random_persistence_module(rng, 4, 3)
    assert dumps(module_to_json(pm)) == dumps(module_to_json(pm))
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')


@pytest.mark.parametrize("text", [
    '{"grid": [0.5], "dims": [0], "step_maps": [], "colimit_dim": 0, "colimit_maps": [[]]}',
    '{"grid": ["0"], "dims": [1], "step_maps": [], "colimit_dim": 1}',
    '{"grid": ["0", "1"], "dims": [1], "step_maps": [], "colimit_dim": 0, "colimit_maps": []}',
    '{"field": "F3", "grid": [], "dims": [], "step_maps": [], "colimit_dim": 0, '
    '"colimit_maps": []}',
    '{"grid": ["x"], "dims": [0], "step_maps": [], "colimit_dim": 0, "colimit_maps": [[]]}',
    '{"grid": ["0"], "dims": [1], "step_maps": [], "colimit_dim": 1, "colimit_maps": [[[1, 0]]]}',
    '[1, 2]',
    '{',
])
def test_malformed_modules(text):
    with pytest.raises(SchemaError):
        module_from_json(loads(text))


def test_malformed_barcode():
    with pytest.raises(SchemaError):
        barcode_from_json({"bars": [{"birth": "2", "death": "1"}]})
    with pytest.raises(SchemaError):
        barcode_from_json({"bars": [{"birth": "0", "death": "colimit", "mult": 0}]})
