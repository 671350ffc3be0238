"""Tests for the system document parser"""

import json
from pathlib import Path

import pytest

from sftpressure.exceptions import (
    BadEntryError,
    ExtraEntryError,
    InputFormatError,
    MissingEntryError,
    NonFiniteError,
    StrandedSymbolError,
)
from sftpressure.parser import (
    DocumentParser,
    document_to_dict,
    format_word,
    load_document,
)
from sftpressure.symbolic import Word, full_shift, golden_mean


@pytest.fixture
def fixtures_dir():
    """Return path to test fixtures directory"""
    return Path(__file__).parent / "fixtures"


@pytest.fixture
def parser():
    return DocumentParser()


def golden_doc(**extra):
    data = {"alphabet_size": 2, "adjacency": [[1, 1], [1, 0]]}
    data.update(extra)
    return data


class TestParseDocument:
    """Test parsing of decoded JSON documents"""

    def test_system_only(self, parser):
        """Test a document without potentials"""
        doc = parser.parse(golden_doc())
        assert doc.system.alphabet_size == 2
        assert doc.system.is_primitive
        assert doc.potentials == {}

    def test_potentials_keep_order(self, parser):
        doc = parser.parse(
            golden_doc(
                potentials=[
                    {"name": "b", "depth": 1, "table": {"1": 1, "2": 0}},
                    {"name": "a", "depth": 1, "table": {"1": 0, "2": 1}},
                ]
            )
        )
        assert list(doc.potentials) == ["b", "a"]
        assert doc.potential("a").table == {(0,): 0.0, (1,): 1.0}

    def test_depth_two_table(self, parser):
        """Test words are 1-indexed strings converted to 0-indexed tuples"""
        doc = parser.parse(
            golden_doc(
                potentials=[
                    {"name": "pair", "depth": 2, "table": {"11": 0.5, "12": -0.25, "21": 1.0}}
                ]
            )
        )
        assert doc.potential("pair").table == {(0, 0): 0.5, (0, 1): -0.25, (1, 0): 1.0}

    def test_not_an_object(self, parser):
        with pytest.raises(InputFormatError, match="JSON object"):
            parser.parse([1, 2])

    @pytest.mark.parametrize("key", ["alphabet_size", "adjacency"])
    def test_missing_key(self, parser, key):
        data = golden_doc()
        del data[key]
        with pytest.raises(InputFormatError, match=key):
            parser.parse(data)

    def test_alphabet_size_type(self, parser):
        with pytest.raises(InputFormatError, match="integer"):
            parser.parse({"alphabet_size": "2", "adjacency": [[1, 1], [1, 0]]})

    def test_invalid_matrix(self, parser):
        with pytest.raises(BadEntryError):
            parser.parse({"alphabet_size": 2, "adjacency": [[1, 2], [1, 0]]})
        with pytest.raises(StrandedSymbolError):
            parser.parse({"alphabet_size": 2, "adjacency": [[1, 0], [1, 0]]})

    def test_duplicate_name(self, parser):
        entry = {"name": "g", "depth": 1, "table": {"1": 1, "2": 0}}
        with pytest.raises(InputFormatError, match="Duplicate"):
            parser.parse(golden_doc(potentials=[entry, entry]))

    def test_potential_missing_field(self, parser):
        with pytest.raises(InputFormatError, match="missing"):
            parser.parse(golden_doc(potentials=[{"name": "g", "table": {}}]))

    def test_non_numeric_value(self, parser):
        entry = {"name": "g", "depth": 1, "table": {"1": "one", "2": 0}}
        with pytest.raises(InputFormatError, match="not a number"):
            parser.parse(golden_doc(potentials=[entry]))

    def test_table_validation_reaches_make_potential(self, parser):
        """Test missing, inadmissible and non-finite entries are rejected"""
        missing = {"name": "g", "depth": 1, "table": {"1": 1}}
        with pytest.raises(MissingEntryError):
            parser.parse(golden_doc(potentials=[missing]))
        forbidden = {"name": "g", "depth": 2, "table": {"11": 0, "12": 0, "21": 0, "22": 0}}
        with pytest.raises(ExtraEntryError):
            parser.parse(golden_doc(potentials=[forbidden]))
        nan = {"name": "g", "depth": 1, "table": {"1": float("nan"), "2": 0}}
        with pytest.raises(NonFiniteError):
            parser.parse(golden_doc(potentials=[nan]))

    def test_unknown_potential_lists_names(self, parser):
        doc = parser.parse(
            golden_doc(potentials=[{"name": "g", "depth": 1, "table": {"1": 1, "2": 0}}])
        )
        with pytest.raises(InputFormatError, match="available: g"):
            doc.potential("h")


class TestParseWord:
    """Test word string conversion"""

    def test_concatenated_digits(self, parser):
        assert parser.parse_word("121", golden_mean()) == Word((0, 1, 0))

    def test_separated_symbols(self, parser):
        """Test alphabets with more than nine symbols"""
        system = full_shift(12)
        assert parser.parse_word("10,2", system) == Word((9, 1))
        assert parser.parse_word("12 1.3", system) == Word((11, 0, 2))

    def test_whitespace_trimmed(self, parser):
        assert parser.parse_word(" 2 ", golden_mean()) == Word((1,))

    @pytest.mark.parametrize("bad", ["", "  ", "1a", "3", "0"])
    def test_invalid_words(self, parser, bad):
        with pytest.raises(InputFormatError):
            parser.parse_word(bad, golden_mean())


class TestFormatWord:
    """Test the inverse word rendering"""

    def test_small_alphabet(self):
        assert format_word((0, 1, 0), 2) == "121"

    def test_large_alphabet(self):
        assert format_word((9, 1), 12) == "10,2"


class TestLoadDocument:
    """Test reading documents from disk"""

    def test_golden_fixture(self, fixtures_dir):
        doc = load_document(fixtures_dir / "golden.json")
        assert list(doc.potentials) == ["phi_t", "g", "zero", "pair"]
        assert doc.potential("pair").depth == 2

    def test_union_fixture(self, fixtures_dir):
        doc = load_document(fixtures_dir / "golden_full2.json")
        assert doc.system.components == ((0, 1), (2, 3))
        assert not doc.system.is_primitive

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_document(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(InputFormatError, match="not valid JSON"):
            load_document(path)

    def test_errors_name_the_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"alphabet_size": 2, "adjacency": [[1, 1]]}))
        with pytest.raises(ValueError, match="bad.json"):
            load_document(path)

    def test_document_to_dict_reparses(self, fixtures_dir, parser):
        """Test serializing a parsed document gives back the same tables"""
        doc = load_document(fixtures_dir / "golden.json")
        again = parser.parse(document_to_dict(doc.system, doc.potentials))
        assert again.system.adjacency.tolist() == doc.system.adjacency.tolist()
        for name, potential in doc.potentials.items():
            assert again.potential(name).table == potential.table
