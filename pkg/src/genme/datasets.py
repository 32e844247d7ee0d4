"""Bundled example domains and the file-management theory generator."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from importlib import resources

from .engine import Theory
from .parser import RunConfig, parse_config, parse_theory

FIXTURES = {
    "family": ("family.pl", ("family_gf.json", "family_dt.json")),
    "arches": ("arches.pl", ("arches.json",)),
    "filemgmt": ("filemgmt.pl", ("filemgmt.json",)),
}


def fixture_path(filename: str):
    return resources.files("genme") / "data" / filename


def fixture_text(filename: str) -> str:
    return fixture_path(filename).read_text(encoding="utf-8")


def load(name: str) -> Theory:
    return parse_theory(fixture_text(FIXTURES[name][0]))


def load_config(filename: str, theory: Theory | None = None) -> RunConfig:
    return parse_config(fixture_text(filename), theory)


@dataclass(frozen=True)
class FileRecord:
    ident: str
    name: str
    media_type: str
    size: int
    created: str  # ISO-8601 date
    folder: str


FILEMGMT_RULES = """\
in_same_folder(F, G) :- in_folder(F, D), in_folder(G, D).
older(F, G) :- creation_time(S, F), creation_time(T, G), lt(S, T).
newer(F, G) :- creation_time(S, F), creation_time(T, G), gt(S, T).
larger(F, G) :- file_size(S, F), file_size(T, G), gt(S, T).

% learned clause
irrelevant(F) :- in_same_folder(F, G), media_type(M, F), media_type(M, G), older(F, G).
"""

# 20 files over three folders; file10, file11 and file12 are the png files in pics.
FILES = (
    FileRecord("file1", "q3Lk0aZp.PDF", "pdf", 48211, "1989-03-02", "docs"),
    FileRecord("file2", "Hh7wPq2e.PDF", "pdf", 10234, "1995-07-19", "docs"),
    FileRecord("file3", "Zx81mNbv.PDF", "pdf", 3312, "2004-11-30", "docs"),
    FileRecord("file4", "Tt5rEw0q.JPG", "jpg", 90211, "1991-01-14", "docs"),
    FileRecord("file5", "Pp2oIu9y.PNG", "png", 4410, "2011-06-08", "docs"),
    FileRecord("file6", "Mm4nBv7c.JPG", "jpg", 77120, "1987-09-23", "pics"),
    FileRecord("file7", "Kk9jHg6f.JPG", "jpg", 65002, "1999-02-11", "pics"),
    FileRecord("file8", "Ll3kJh1g.JPG", "jpg", 12003, "2008-12-01", "pics"),
    FileRecord("file9", "Dd6sAq8w.PNG", "png", 8845, "2014-04-17", "misc"),
    FileRecord("file10", "1fTmw4WN.PNG", "png", 6902, "1984-12-18", "pics"),
    FileRecord("file11", "Sv4Xy5n6.PNG", "png", 12287, "1996-12-20", "pics"),
    FileRecord("file12", "Rr1eWq3t.PNG", "png", 5120, "2002-08-05", "pics"),
    FileRecord("file13", "Gg8fDs5a.PDF", "pdf", 20480, "1993-05-27", "pics"),
    FileRecord("file14", "Bb2vCx4z.PDF", "pdf", 30720, "2001-10-09", "pics"),
    FileRecord("file15", "Nn5mQw8e.JPG", "jpg", 40960, "1990-06-30", "misc"),
    FileRecord("file16", "Ww7eRt2y.JPG", "jpg", 51200, "2006-03-21", "misc"),
    FileRecord("file17", "Yy0uIo4p.PNG", "png", 2048, "1986-11-11", "misc"),
    FileRecord("file18", "Uu3iOp6a.PDF", "pdf", 7168, "1998-01-05", "misc"),
    FileRecord("file19", "Ee9rTy1u.PNG", "png", 9216, "2009-09-09", "docs"),
    FileRecord("file20", "Ii6oPa3s.PDF", "pdf", 15360, "2016-02-29", "misc"),
)


def file_management_text(files: Iterable[FileRecord] = FILES) -> str:
    """Theory text for a file system: one fact block per file plus the rules."""
    lines = ["% File management domain: file metadata as facts; irrelevant/1 is learned.", ""]
    for f in files:
        quoted_name = f.name.replace("\\", "\\\\").replace("'", "\\'")
        lines += [
            f"file({f.ident}).",
            f"file_name('{quoted_name}', {f.ident}).",
            f"media_type({f.media_type}, {f.ident}).",
            f"file_size({f.size}, {f.ident}).",
            f"creation_time('{f.created}', {f.ident}).",
            f"in_folder({f.ident}, {f.folder}).",
            "",
        ]
    return "\n".join(lines) + FILEMGMT_RULES


def file_management_config(target: str, files: Iterable[FileRecord] = FILES) -> dict:
    return {
        "target": target,
        "filters": [
            {"from": "older", "to": "newer", "mode": "single"},
            {"from": "newer", "to": "older", "mode": "single"},
        ],
        "candidate_domains": [[f.ident for f in files]],
    }
