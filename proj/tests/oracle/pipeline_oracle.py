#!/usr/bin/env python3
"""Independent reference for the toy pipeline.

Recomputes entity attachments and text classifications straight from the
fixture files and checks a built model directory against them.

usage: pipeline_oracle.py FIXTURE_DIR STOPWORDS MODEL_DIR CLASSIFY_OUTPUT
"""

import math
import re
import sys
from collections import defaultdict
from pathlib import Path

ALPHA = 0.7
BETA = 0.004
TAU = 0.8
K = 5
ALPHA_CENTROID = 0.7
MAX_LEN = 4
TOL = 1e-9

TOKEN = re.compile(r"[0-9A-Za-z\x80-￿]+(?:'[0-9A-Za-z\x80-￿]+)*")


def tokenize(text):
    return [t.lower() for t in TOKEN.findall(text)]


def normalize_key(s):
    return " ".join(s.replace("_", " ").split()).lower()


def unescape(s):
    return re.sub(r"\\([nt\\])", lambda m: {"n": "\n", "t": "\t", "\\": "\\"}[m.group(1)], s)


def greedy_match(tokens, phrases, window):
    found, i = [], 0
    while i < len(tokens):
        for n in range(min(window, len(tokens) - i), 0, -1):
            key = " ".join(tokens[i:i + n])
            if key in phrases:
                found.append(phrases[key])
                i += n
                break
        else:
            i += 1
    return found


def load(fixture):
    paths = [l.strip() for l in (fixture / "categories.txt").read_text().splitlines()]
    paths = [p for p in paths if p and not p.startswith("#")]
    parent = {p: (p.rsplit("/", 1)[0] or None) for p in paths}
    children = defaultdict(list)
    for p in paths:
        if parent[p]:
            children[parent[p]].append(p)
    docs = defaultdict(list)
    for line in (fixture / "documents.tsv").read_text().splitlines():
        if line:
            _, cat, text = line.split("\t")
            text = unescape(text)
            if text.strip():
                docs[cat.strip()].append(text)
    kb = defaultdict(int)
    for line in (fixture / "kb_pairs.tsv").read_text().splitlines():
        if line.strip() and not line.startswith("#"):
            c, e, n = line.split("\t")
            kb[(normalize_key(c), normalize_key(e))] += int(n)
    return paths, parent, children, docs, kb


def merge(paths, children, base, alpha):
    out = {}

    def visit(p):
        if p in out:
            return out[p]
        if not children[p]:
            v = dict(base[p])
        else:
            keys = set(base[p])
            kids = [visit(c) for c in children[p]]
            for kv in kids:
                keys |= set(kv)
            v = {k: alpha * base[p].get(k, 0.0)
                 + (1 - alpha) * math.fsum(kv.get(k, 0.0) for kv in kids) / len(kids)
                 for k in keys}
        out[p] = {k: w for k, w in v.items() if w > 0}
        return out[p]

    for p in paths:
        visit(p)
    return out


def attachments(paths, children, docs, kb):
    concepts = {" ".join(tokenize(c)): c for c, _ in kb}
    tf = defaultdict(lambda: defaultdict(int))
    df = defaultdict(int)
    for p in paths:
        for text in docs[p]:
            seen = greedy_match(tokenize(text), concepts, MAX_LEN)
            for c in seen:
                tf[p][c] += 1
            for c in set(seen):
                df[c] += 1
    entities_of = defaultdict(set)
    c_total, e_total = defaultdict(int), defaultdict(int)
    for (c, e), n in kb.items():
        entities_of[c].add(e)
        c_total[c] += n
        e_total[e] += n

    def weight(t, c):
        n = tf[t][c]
        a, b = n / math.log(1 + df[c]), n / math.log(1 + len(entities_of[c]))
        return a * math.log(a) * b * math.log(b) if a > 1 and b > 1 else 0.0

    base = {p: {c: weight(p, c) for c in tf[p] if weight(p, c) > 0} for p in paths}
    vectors = merge(paths, children, base, ALPHA)

    typed = defaultdict(dict)
    for (c, e), n in kb.items():
        score = (n / c_total[c]) * (n / e_total[e])
        if score > BETA:
            typed[e][c] = score

    result, skipped = {}, []
    for e in sorted(typed):
        rel = [math.fsum(w * vectors[p].get(c, 0.0) for c, w in typed[e].items()) for p in paths]
        if all(r == 0 for r in rel):
            skipped.append(e)
            continue
        top = max(rel)
        z = math.fsum(math.exp(r - top) for r in rel)
        order = sorted(range(len(paths)), key=lambda i: (-rel[i], i))[:K]
        result[e] = [(paths[i], math.exp(rel[i] - top) / z, rel[i]) for i in order]
    return result, skipped, e_total


def classifier(paths, children, docs, stopwords):
    def terms(text):
        return [t for t in tokenize(text) if t not in stopwords]

    all_docs = [d for p in paths for d in docs[p]]
    df = defaultdict(int)
    for d in all_docs:
        for t in set(terms(d)):
            df[t] += 1
    idf = {t: math.log(1 + len(all_docs) / n) for t, n in df.items()}

    def vec(text):
        v = defaultdict(float)
        for t in terms(text):
            if t in idf:
                v[t] += idf[t]
        return v

    raw = {}
    for p in paths:
        acc = defaultdict(float)
        for d in docs[p]:
            for t, w in vec(d).items():
                acc[t] += w / len(docs[p])
        raw[p] = acc
    merged = merge(paths, children, raw, ALPHA_CENTROID)
    centroids = {}
    for p in paths:
        norm = math.sqrt(math.fsum(w * w for w in merged[p].values()))
        centroids[p] = {t: w / norm for t, w in merged[p].items()} if norm > 0 else {}
    return vec, centroids


def main():
    fixture, stop_file, model, classified = map(Path, sys.argv[1:5])
    paths, parent, children, docs, kb = load(fixture)
    failures = []

    expected, skipped, e_total = attachments(paths, children, docs, kb)
    got = defaultdict(list)
    for line in (model / "attachments.tsv").read_text().splitlines():
        e, p, prob, rank = line.split("\t")
        got[e].append((p, float(prob), int(rank)))
    if sorted(got) != sorted(expected):
        failures.append(f"attached entity sets differ: {sorted(set(got) ^ set(expected))}")
    for e, rows in expected.items():
        for r, (p, prob, rel) in enumerate(rows):
            if e not in got or r >= len(got[e]):
                failures.append(f"{e}: missing rank {r + 1}")
                continue
            gp, gprob, grank = got[e][r]
            if gp != p and abs(rel - dict((q, s) for q, _, s in rows).get(gp, -1)) > TOL:
                failures.append(f"{e} rank {r + 1}: {gp} != {p}")
            if abs(gprob - prob) > TOL * max(1.0, prob) or grank != r + 1:
                failures.append(f"{e} rank {r + 1}: prob {gprob} vs {prob}")
    got_skipped = (model / "skipped_entities.txt").read_text().split("\n")
    if [s for s in got_skipped if s] != skipped:
        failures.append(f"skipped entities {got_skipped} vs {skipped}")

    stopwords = {l.strip() for l in stop_file.read_text().splitlines()
                 if l.strip() and not l.startswith("#")}
    vec, centroids = classifier(paths, children, docs, stopwords)
    lexicon = {" ".join(tokenize(e)): e for e in expected if e_total[e] >= 1}
    inputs = (fixture / "inputs.txt").read_text().splitlines()
    rows = defaultdict(list)
    for line in classified.read_text().splitlines():
        n, rank, p, score = line.split("\t")
        rows[int(n)].append((int(rank), p, float(score)))
    for n, text in enumerate(inputs, 1):
        v = vec(text)
        vn = math.sqrt(math.fsum(w * w for w in v.values()))
        term = {p: 0.0 if vn == 0 else
                min(1.0, max(0.0, math.fsum(w * centroids[p].get(t, 0.0) for t, w in v.items()) / vn))
                for p in paths}
        hits = greedy_match(tokenize(text), lexicon, MAX_LEN)
        ent = defaultdict(float)
        for e in hits:
            for p, prob, _ in expected[e]:
                ent[p] += prob / len(hits)
        final = {p: (1 - TAU) * term[p] + TAU * ent[p] for p in paths}
        want = sorted(final.values(), reverse=True)[:K]
        mine = rows.get(n, [])
        if len(mine) != len(want):
            failures.append(f"line {n}: {len(mine)} rows, expected {len(want)}")
            continue
        for (rank, p, score), w in zip(mine, want):
            if abs(score - final[p]) > TOL or abs(score - w) > TOL:
                failures.append(f"line {n} rank {rank}: {p} {score} vs oracle {final[p]} / {w}")

    for f in failures:
        print("MISMATCH", f)
    print(f"{len(expected)} attached entities, {len(inputs)} inputs checked; "
          f"{len(failures)} mismatches")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
