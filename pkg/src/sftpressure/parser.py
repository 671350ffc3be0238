"""Document parser for sftpressure

Parses the JSON system description:

    {"alphabet_size": 2,
     "adjacency": [[1, 1], [1, 0]],
     "potentials": [{"name": "phi_t", "depth": 1, "table": {"1": 1.0, "2": 0.0}}]}

Word strings are 1-indexed symbols concatenated ("12" is symbol 1 then
symbol 2). Alphabets with more than nine symbols separate symbols with
commas, dots or spaces ("10,2").
"""

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

from sftpressure.exceptions import InputFormatError, SftPressureError
from sftpressure.symbolic import Potential, SftSystem, Word, make_potential, make_sft


@dataclass
class SftDocument:
    """A parsed system together with its named potentials

    Attributes:
        system: The validated SftSystem
        potentials: Potentials by name, in document order
    """

    system: SftSystem
    potentials: dict[str, Potential] = field(default_factory=dict)

    def potential(self, name: str) -> Potential:
        try:
            return self.potentials[name]
        except KeyError:
            known = ", ".join(self.potentials) or "none"
            raise InputFormatError(
                f"Unknown potential: {name} (available: {known})"
            ) from None


class DocumentParser:
    """Parse system documents and word strings

    Examples:
        >>> parser = DocumentParser()
        >>> doc = parser.parse({"alphabet_size": 2, "adjacency": [[1, 1], [1, 0]]})
        >>> parser.parse_word("121", doc.system)
        Word(symbols=(0, 1, 0))
    """

    SEPARATORS = re.compile(r"[,.\s]+")

    def parse(self, data: Any) -> SftDocument:
        """Parse an already-decoded JSON document

        Raises:
            InputFormatError: Missing keys or wrong types
            InvalidSystemError, InvalidPotentialError: Invalid content
        """
        if not isinstance(data, dict):
            raise InputFormatError("Document must be a JSON object")
        for key in ("alphabet_size", "adjacency"):
            if key not in data:
                raise InputFormatError(f"Document is missing '{key}'")

        size = data["alphabet_size"]
        if not isinstance(size, int) or isinstance(size, bool):
            raise InputFormatError(f"alphabet_size must be an integer, got {size!r}")
        system = make_sft(size, data["adjacency"])

        document = SftDocument(system)
        for entry in data.get("potentials", []):
            name, potential = self._parse_potential(entry, system)
            if name in document.potentials:
                raise InputFormatError(f"Duplicate potential name: {name}")
            document.potentials[name] = potential
        return document

    def _parse_potential(
        self, entry: Any, system: SftSystem
    ) -> tuple[str, Potential]:
        if not isinstance(entry, dict):
            raise InputFormatError("Each potential must be a JSON object")
        try:
            name = entry["name"]
            depth = entry["depth"]
            raw_table = entry["table"]
        except KeyError as e:
            raise InputFormatError(f"Potential is missing {e}") from None
        if not isinstance(raw_table, dict):
            raise InputFormatError(f"Table of potential {name} must be an object")

        table = {}
        for word_str, value in raw_table.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InputFormatError(
                    f"Potential {name}: value for '{word_str}' is not a number"
                )
            table[self.parse_word(word_str, system).symbols] = value
        return name, make_potential(system, depth, table)

    def parse_word(self, word_str: str, system: SftSystem) -> Word:
        """Convert a 1-indexed word string into a 0-indexed Word

        Admissibility is not checked here; make_potential and birkhoff_sum
        do that.
        """
        text = word_str.strip()
        if not text:
            raise InputFormatError("Empty word string")
        if self.SEPARATORS.search(text):
            parts = [p for p in self.SEPARATORS.split(text) if p]
        else:
            parts = list(text)

        symbols = []
        for part in parts:
            if not part.isdigit():
                raise InputFormatError(f"Bad symbol '{part}' in word '{word_str}'")
            s = int(part)
            if not 1 <= s <= system.alphabet_size:
                raise InputFormatError(
                    f"Symbol {s} in word '{word_str}' is outside 1..{system.alphabet_size}"
                )
            symbols.append(s - 1)
        return Word(tuple(symbols))


def load_document(path: Union[str, Path]) -> SftDocument:
    """Read and parse a JSON system document

    Raises:
        FileNotFoundError: The file does not exist
        InputFormatError: The file is not valid JSON or misses keys
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path} is not valid JSON: {e}") from e
    try:
        return DocumentParser().parse(data)
    except SftPressureError as e:
        raise type(e)(f"{path}: {e}") from e


def format_word(symbols, alphabet_size: int) -> str:
    """Render a 0-indexed word as a 1-indexed word string"""
    parts = [str(s + 1) for s in symbols]
    return ",".join(parts) if alphabet_size > 9 else "".join(parts)


def document_to_dict(system: SftSystem, potentials: dict[str, Potential]) -> dict:
    """Inverse of DocumentParser.parse"""
    return {
        "alphabet_size": system.alphabet_size,
        "adjacency": system.adjacency.tolist(),
        "potentials": [
            {
                "name": name,
                "depth": p.depth,
                "table": {
                    format_word(w, system.alphabet_size): v
                    for w, v in sorted(p.table.items())
                },
            }
            for name, p in potentials.items()
        ],
    }
