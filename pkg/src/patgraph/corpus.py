"""Patent record parsing, text normalization and IPC code extraction."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import MalformedIpc, MissingField

log = logging.getLogger(__name__)

_DIGITS = {}
for _i in range(10):
    _DIGITS[0x06F0 + _i] = str(_i)  # extended Arabic-Indic (Persian)
    _DIGITS[0x0660 + _i] = str(_i)  # Arabic-Indic
_CHAR_MAP = dict(_DIGITS)
_CHAR_MAP[0x064A] = "ی"  # Arabic yeh -> Persian yeh
_CHAR_MAP[0x0643] = "ک"  # Arabic kaf -> Persian kaf

DEFAULT_HONORIFICS = ("آقای", "آقا", "خانم", "دکتر", "مهندس", "Mr.", "Mrs.", "Ms.", "Dr.")

IPC_PATTERN = re.compile(r"^([A-H])([0-9]{2})([A-Z])\s*([0-9]+/[0-9]+)$")
_IPC_SCAN = re.compile(r"(?<![A-Za-z0-9])([A-H])([0-9]{2})([A-Z])\s*([0-9]+/[0-9]+)(?![0-9])")


def normalize_text(raw: str) -> str:
    """Map Persian/Arabic digits to ASCII, unify yeh/kaf, collapse whitespace."""
    return " ".join(raw.translate(_CHAR_MAP).split())


@dataclass(frozen=True, order=True)
class IpcCode:
    section: str
    class_digits: str
    subclass_letter: str
    group: str

    @property
    def section_key(self) -> str:
        return self.section

    @property
    def class_key(self) -> str:
        return self.section + self.class_digits

    @property
    def subclass_key(self) -> str:
        return self.section + self.class_digits + self.subclass_letter

    @property
    def full_key(self) -> str:
        return f"{self.subclass_key} {self.group}"

    def __str__(self):
        return self.full_key


def parse_ipc(token: str) -> IpcCode:
    """Parse a single digit-normalized IPC symbol such as ``"H04M 1/00"``."""
    m = IPC_PATTERN.match(token.strip())
    if m is None:
        raise MalformedIpc(token)
    return IpcCode(*m.groups())


def extract_ipc_codes(text: str) -> list[IpcCode]:
    """All IPC codes in free text, in order, de-duplicated by full key."""
    seen = set()
    out = []
    for m in _IPC_SCAN.finditer(normalize_text(text)):
        code = IpcCode(*m.groups())
        if code.full_key not in seen:
            seen.add(code.full_key)
            out.append(code)
    return out


@dataclass
class PatentRecord:
    registration_id: str
    application_id: str | None = None
    subject: str | None = None
    ipc_codes: list[IpcCode] = field(default_factory=list)
    owner: str | None = None
    inventors: list[str] = field(default_factory=list)
    institution: str | None = None
    nationality: str | None = None
    registration_date: str | None = None
    protection_years: int | None = None

    @property
    def subclass_keys(self) -> list[str]:
        """Distinct subclass keys in first-appearance order."""
        return list(dict.fromkeys(c.subclass_key for c in self.ipc_codes))

    def to_dict(self) -> dict:
        d = {
            "registration_id": self.registration_id,
            "application_id": self.application_id,
            "subject": self.subject,
            "ipc": [c.full_key for c in self.ipc_codes],
            "owner": self.owner,
            "inventors": list(self.inventors),
            "institution": self.institution,
            "nationality": self.nationality,
            "registration_date": self.registration_date,
            "protection_years": self.protection_years,
        }
        return {k: v for k, v in d.items() if v is not None}


def _opt_str(obj, key):
    value = obj.get(key)
    if value is None:
        return None
    value = normalize_text(str(value))
    return value or None


def parse_record(obj: Mapping, strict: bool = False, context: str | None = None) -> PatentRecord:
    """Build a :class:`PatentRecord` from one decoded JSONL object.

    In lenient mode (the default) malformed IPC strings are dropped with a
    warning; in strict mode the first one raises :class:`MalformedIpc`.
    """
    rid = _opt_str(obj, "registration_id")
    if not rid:
        raise MissingField("registration_id", context)

    raw_ipc = obj.get("ipc") or []
    if isinstance(raw_ipc, str):
        raw_ipc = [raw_ipc]
    codes: list[IpcCode] = []
    seen = set()
    for token in raw_ipc:
        token = normalize_text(str(token))
        try:
            code = parse_ipc(token)
        except MalformedIpc:
            where = f"record {rid}" + (f", {context}" if context else "")
            if strict:
                raise MalformedIpc(token, where) from None
            log.warning("skipping malformed IPC %r in %s", token, where)
            continue
        if code.full_key not in seen:
            seen.add(code.full_key)
            codes.append(code)

    inventors = obj.get("inventors") or []
    if isinstance(inventors, str):
        inventors = [inventors]
    inventors = [s for s in (normalize_text(str(x)) for x in inventors) if s]

    years = obj.get("protection_years")
    if years is not None and not isinstance(years, int):
        text = normalize_text(str(years))
        years = int(text) if text.isdigit() else None

    return PatentRecord(
        registration_id=rid,
        application_id=_opt_str(obj, "application_id"),
        subject=_opt_str(obj, "subject"),
        ipc_codes=codes,
        owner=_opt_str(obj, "owner"),
        inventors=inventors,
        institution=_opt_str(obj, "institution"),
        nationality=_opt_str(obj, "nationality"),
        registration_date=_opt_str(obj, "registration_date"),
        protection_years=years,
    )


def read_records(path, strict: bool = False) -> list[PatentRecord]:
    """Parse a JSON Lines file; blank lines are skipped."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            records.append(parse_record(json.loads(line), strict=strict, context=f"{path}:{lineno}"))
    return records


def write_records(records: Iterable[PatentRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def strip_honorifics(name: str, honorifics: Iterable[str] = DEFAULT_HONORIFICS) -> str:
    prefixes = sorted(honorifics, key=len, reverse=True)
    changed = True
    while changed:
        changed = False
        for h in prefixes:
            if name == h:
                break
            if name.startswith(h + " "):
                name = name[len(h) + 1:].lstrip()
                changed = True
                break
    return name


def _match_key(name: str, honorifics) -> str:
    return strip_honorifics(normalize_text(name), honorifics).casefold()


def resolve_institutions(
    records: Iterable[PatentRecord],
    aliases: Mapping[str, str] | None = None,
    honorifics: Iterable[str] = DEFAULT_HONORIFICS,
) -> dict[str, str]:
    """Map every institution surface form seen in ``records`` to a canonical name.

    Names are normalized, stripped of leading honorifics and compared
    case-insensitively; an alias table (also matched that way) can redirect a
    name to an explicit canonical form. Otherwise the first-seen stripped form
    of a group is its canonical name.
    """
    honorifics = tuple(honorifics)
    alias_table = {}
    for src, dst in (aliases or {}).items():
        alias_table[_match_key(src, honorifics)] = normalize_text(dst)

    canonical_by_key: dict[str, str] = {}
    mapping: dict[str, str] = {}
    for rec in records:
        surface = rec.institution
        if not surface or surface in mapping:
            continue
        key = _match_key(surface, honorifics)
        if key in alias_table:
            target = alias_table[key]
            key = _match_key(target, honorifics)
            canonical_by_key.setdefault(key, target)
        else:
            canonical_by_key.setdefault(key, strip_honorifics(normalize_text(surface), honorifics))
        mapping[surface] = canonical_by_key[key]
    return mapping
