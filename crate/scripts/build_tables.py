#!/usr/bin/env python3
"""Regenerate the bundled character tables under crates/core/data/.

Sources (all installable from PyPI):
  pypinyin           reading lists (tone marks stripped here)
  char-similar       four-corner codes, structure classes, decompositions,
                     five-class stroke orders, a frequency ranking
  four-corner-method fallback four-corner codes
  hanzi-chaizi       fallback decompositions

Usage:
  pip install pypinyin char-similar four-corner-method hanzi-chaizi
  python3 scripts/build_tables.py [--size 3500] [--out crates/core/data]

To swap in larger dictionaries, raise --size or write the four TSV files
directly; the loader only cares about the file formats documented in the
README.
"""

import argparse
import importlib.util
import json
import os
import pickle
import unicodedata

# Characters that tests and fixtures rely on, included regardless of rank.
EXTRA = (
    "忠仲中心人入亻木本读度少行囚国睛镜记得戴眼"
    "他她它在再做作的地已己以吗妈码马蚂坐座部步"
    "带戴象像侯候练炼历厉辨辩辫情请清晴精静"
    "晚完玩万往望忘网旺汪王"
    "我们今天气很好去公园散步明要早点起床这是一个问题"
    "小时候喜欢看书学习工作生活"
)

STROKE_SYMBOLS = {"1": "一", "2": "丨", "3": "ノ", "4": "、", "5": "𠃌"}

# (letter, structure name, char-similar class id)
STRUCTURES = [
    ("B", "LeftRight", "1"),
    ("C", "UpDown", "2"),
    ("D", "Enclosure", "11"),
    ("E", "LeftMiddleRight", "3"),
    ("F", "UpMiddleDown", "4"),
    ("G", "UpperRightEnclosure", "5"),
    ("H", "UpperLeftEnclosure", "6"),
    ("I", "LowerLeftEnclosure", "7"),
    ("J", "TopEnclosure", "8"),
    ("K", "BottomEnclosure", "9"),
    ("L", "LeftEnclosure", "10"),
    ("M", "Interlocked", "12"),
    ("N", "Triangle", "13"),
]
CLASS_TO_LETTER = {cls: letter for letter, _, cls in STRUCTURES}


def is_han(c):
    if len(c) != 1:
        return False
    cp = ord(c)
    return (
        0x4E00 <= cp <= 0x9FFF
        or 0x3400 <= cp <= 0x4DBF
        or 0x20000 <= cp <= 0x2A6DF
        or 0x2A700 <= cp <= 0x2EE5F
        or 0x30000 <= cp <= 0x323AF
    )


def package_dir(name):
    spec = importlib.util.find_spec(name)
    if spec is None:
        raise SystemExit(f"package {name!r} is not installed")
    return list(spec.submodule_search_locations)[0]


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def strip_tone(syllable):
    s = syllable.replace("ü", "v").replace("Ü", "v")
    s = "".join(ch for ch in unicodedata.normalize("NFD", s) if not unicodedata.combining(ch))
    s = s.lower()
    return "".join(ch for ch in s if "a" <= ch <= "z")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=3500)
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data"))
    args = ap.parse_args()

    cs = os.path.join(package_dir("char_similar"), "data")
    fourangle = load_json(os.path.join(cs, "char_fourangle.dict"))
    struct = load_json(os.path.join(cs, "char_struct.dict"))
    order = load_json(os.path.join(cs, "char_order.dict"))
    parts = load_json(os.path.join(cs, "char_stroke.dict"))
    freq = load_json(os.path.join(cs, "char_frequency.dict"))
    readings = load_json(os.path.join(package_dir("pypinyin"), "pinyin_dict.json"))
    with open(os.path.join(package_dir("four_corner_method"), "data", "data.pkl"), "rb") as fh:
        fcm = pickle.load(fh)
    with open(os.path.join(package_dir("hanzi_chaizi"), "data", "data.pkl"), "rb") as fh:
        chaizi = pickle.load(fh)

    def four_corner(c):
        for src in (fourangle, fcm):
            code = src.get(c)
            if code and len(code) >= 4 and code[:4].isdigit():
                return code[:4]
        return None

    def pinyin(c):
        raw = readings.get(str(ord(c)))
        if not raw:
            return None
        out = []
        for syl in raw.split(","):
            s = strip_tone(syl)
            if s and s not in out:
                out.append(s)
        return out or None

    def strokes(c):
        seq = order.get(c)
        if not seq or any(d not in STROKE_SYMBOLS for d in seq):
            return None
        return "".join(STROKE_SYMBOLS[d] for d in seq)

    def decomposition(c):
        cls = struct.get(c)
        if cls is None:
            return None
        if cls == "0":
            return ("A", [])
        letter = CLASS_TO_LETTER.get(cls)
        if letter is None:
            return None
        options = []
        if c in parts:
            options.append(parts[c])
        options.extend(chaizi.get(c, []))
        usable = [
            o for o in options
            if len(o) >= 2 and all(len(p) == 1 and is_han(p) and p != c for p in o)
        ]
        for o in usable:
            if all(four_corner(p) for p in o):
                return (letter, o)
        if usable:
            return (letter, usable[0])
        return None

    ranked = sorted((c for c in freq if is_han(c)), key=lambda c: (-freq[c], ord(c)))
    charset = sorted(set(ranked[: args.size]) | {c for c in EXTRA if is_han(c)}, key=ord)

    table_chars = set(charset)
    for c in charset:
        d = decomposition(c)
        if d:
            table_chars.update(d[1])
    table_chars = sorted(table_chars, key=ord)

    os.makedirs(args.out, exist_ok=True)
    missing = {}

    def note(c, table):
        missing.setdefault(c, []).append(table)

    with open(os.path.join(args.out, "pinyin.tsv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# toneless readings, most common first; v stands for u-umlaut\n")
        for c in table_chars:
            p = pinyin(c)
            if p:
                fh.write(f"{c}\t{','.join(p)}\n")
            else:
                note(c, "pinyin")

    with open(os.path.join(args.out, "fourcorner.tsv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# first four digits of the four-corner index\n")
        for c in table_chars:
            code = four_corner(c)
            if code:
                fh.write(f"{c}\t{code}\n")
            else:
                note(c, "fourcorner")

    with open(os.path.join(args.out, "decomp.tsv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("#alphabet: " + ",".join(f"{l}={n}" for l, n, _ in STRUCTURES) + "\n")
        fh.write("# one-level decomposition; A marks an atomic character\n")
        for c in table_chars:
            d = decomposition(c)
            if d:
                fh.write(f"{c}\t{d[0]}\t{''.join(d[1])}\n")
            else:
                note(c, "decomp")

    with open(os.path.join(args.out, "strokes.tsv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("#strokes: " + "".join(STROKE_SYMBOLS[k] for k in sorted(STROKE_SYMBOLS)) + "\n")
        fh.write("# five-class stroke order\n")
        for c in table_chars:
            s = strokes(c)
            if s:
                fh.write(f"{c}\t{s}\n")
            else:
                note(c, "strokes")

    with open(os.path.join(args.out, "missing.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# characters lacking one or more table entries\n")
        for c in sorted(missing, key=ord):
            fh.write(f"{c}\t{','.join(missing[c])}\n")

    with open(os.path.join(args.out, "charset.txt"), "w", encoding="utf-8", newline="\n") as fh:
        for c in charset:
            fh.write(c + "\n")

    print(f"charset {len(charset)}, table rows {len(table_chars)}, incomplete {len(missing)}")


if __name__ == "__main__":
    main()
