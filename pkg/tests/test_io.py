import json
from fractions import Fraction

import pytest

from wpcheck.dist import ExplicitDistribution, ProductDistribution, distribution_to_json
from wpcheck.errors import InvalidDistribution
from wpcheck.io import (
    ParseError,
    distribution_from_json,
    format_tt,
    parse_tt,
    read_distribution,
    read_tt,
    read_weights,
    write_tt,
)
from wpcheck.scf import parity, plurality, random_neutral_function

F = Fraction


class TestTruthTables:
    def test_compact_and_spaced_agree(self):
        assert parse_tt("2 3\n01101001\n") == parse_tt("2 3\n0 1 1 0\n1 0 0 1\n") == parity(3)

    @pytest.mark.parametrize("compact", [True, False])
    def test_roundtrip(self, compact, tmp_path):
        f = random_neutral_function(3, 3, 5)
        write_tt(f, tmp_path / "f.tt", compact)
        assert read_tt(tmp_path / "f.tt") == f
        assert parse_tt(format_tt(f, compact)) == f

    def test_wide_alphabet_uses_spaces(self):
        f = plurality(11, 1)
        assert parse_tt(format_tt(f, compact=True)) == f

    @pytest.mark.parametrize(
        "text",
        ["", "2 3", "2 x 0 1", "1 2 0", "2 2 0 1 1", "2 2 0 1 1 2", "2 2 0 1 a 1", "2 2 01101"],
    )
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_tt(text)


class TestDistributions:
    def test_product_roundtrip(self):
        P = ProductDistribution.iid(["1/2", "1/3", "1/6"], 2)
        assert distribution_from_json(json.loads(json.dumps(distribution_to_json(P)))) == P

    def test_explicit_roundtrip(self, tmp_path):
        P = ExplicitDistribution.uniform_on(2, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        path = tmp_path / "d.json"
        path.write_text(json.dumps(distribution_to_json(P)))
        assert read_distribution(path) == P

    def test_explicit_infers_k_from_function(self):
        data = {"type": "explicit", "support": [{"x": [0, 1], "p": "1"}]}
        assert distribution_from_json(data, k=3).k == 3

    @pytest.mark.parametrize(
        "data",
        [
            {"type": "mixture"},
            {"type": "explicit", "support": []},
            {"type": "explicit", "support": [{"x": [0], "p": "1/2"}, {"x": [0], "p": "1/2"}]},
            {"type": "product", "p": [["1/2", "1/3"]]},
        ],
    )
    def test_invalid(self, data):
        with pytest.raises(InvalidDistribution):
            distribution_from_json(data, 2)


class TestWeights:
    def test_list_and_object(self, tmp_path):
        (tmp_path / "a.json").write_text('["1/2", "1/4", 0.25]')
        (tmp_path / "b.json").write_text('{"weights": ["1/2", "1/4", "1/4"]}')
        assert read_weights(tmp_path / "a.json") == read_weights(tmp_path / "b.json") == [F(1, 2), F(1, 4), F(1, 4)]
