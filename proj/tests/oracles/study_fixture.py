"""Writes the 6-participant study fixture and prints its expected metrics.

Metrics are computed here with plain loops, independently of evalkit.
Run: python3 tests/oracles/study_fixture.py fixtures/study
"""
import json
import os
import sys

STORIES = ["s1", "s2", "s3", "s4", "s5"]
# participant -> [(interface, story, [answers], links, words, seconds)]
# an answer is None (blank), "NA" ("No answer") or a number of aspects.
PLAN = {
    "p1": [("article", "s1", [1, 0, None, 2], 0, 820, 312),
           ("headlines", "s2", [0, None, None, 1], 3, 240, 290),
           ("annotated", "s3", [2, 3, 1, 2], 1, 1010, 355)],
    "p2": [("headlines", "s1", [1, 1, 0, "NA"], 5, 260, 301),
           ("annotated", "s2", [3, 2, 2, 1], 0, 990, 348),
           ("article", "s4", [1, None, 0, 1], 0, 760, 333)],
    "p3": [("annotated", "s5", [1, 2, 0, 2], 2, 940, 360),
           ("article", "s3", [0, 0, 1, 0], 1, 800, 270),
           ("headlines", "s4", [2, 1, None, 0], 0, 230, 244)],
    "p4": [("article", "s2", [2, 1, 1, None], 0, 790, 318),
           ("annotated", "s4", [2, 2, 3, 1], 3, 1100, 402),
           ("headlines", "s5", [0, 0, None, "NA"], 4, 250, 199)],
    "p5": [("headlines", "s3", [1, 0, 0, 1], 1, 270, 260),
           ("article", "s5", [1, 1, None, 0], 0, 810, 300),
           ("annotated", "s1", [1, 3, 2, 0], 2, 960, 377)],
    "p6": [("annotated", "s2", [2, 1, 2, 2], 0, 1020, 340),
           ("headlines", "s1", [None, 1, 0, 2], 2, 245, 280),
           ("article", "s3", [2, 0, 1, 1], 1, 780, 310)],
}
PREDICTION = {("p1", "annotated"): "two_sided", ("p2", "annotated"): "hypothetical",
              ("p3", "annotated"): "two_sided", ("p4", "annotated"): "two_sided",
              ("p1", "article"): "one_sided", ("p2", "article"): "one_sided",
              ("p3", "article"): "two_sided", ("p4", "article"): "hypothetical"}


def rows():
    out = []
    for pid, sessions in PLAN.items():
        for kind, story, answers, links, words, secs in sessions:
            for q, a in enumerate(answers):
                if a is None:
                    text, ids = "", []
                elif a == "NA":
                    text, ids = "No answer", []
                else:
                    text = "answer %s %s q%d" % (pid, story, q)
                    ids = list(range(1, a + 1))
                row = {"participant_id": pid, "story_id": story, "interface_kind": kind,
                       "question_index": q, "answer_text": text, "aspect_ids": ids,
                       "links_opened": links, "words_shown": words, "duration_seconds": secs}
                if q == 3 and (pid, kind) in PREDICTION:
                    row["prediction_category"] = PREDICTION[(pid, kind)]
                out.append(row)
    return out


def metrics(data):
    result = {}
    for kind in sorted({r["interface_kind"] for r in data}):
        group = [r for r in data if r["interface_kind"] == kind]
        n = len(group)
        blank = [r["answer_text"].strip().lower() in ("", "no answer") for r in group]
        scores = [0 if b else len(r["aspect_ids"]) for r, b in zip(group, blank)]
        sessions = {}
        for r in group:
            sessions[(r["participant_id"], r["story_id"])] = (r["links_opened"], r["words_shown"], r["duration_seconds"])
        k = len(sessions)
        result[kind] = {
            "score_mean": sum(scores) / n,
            "pct_no_ans": 100 * sum(blank) / n,
            "pct_s0": 100 * sum(1 for s, b in zip(scores, blank) if not b and s == 0) / n,
            "pct_s1": 100 * sum(1 for s in scores if s == 1) / n,
            "pct_s2plus": 100 * sum(1 for s in scores if s >= 2) / n,
            "links_mean": sum(v[0] for v in sessions.values()) / k,
            "pct_any_link": 100 * sum(1 for v in sessions.values() if v[0] > 0) / k,
            "words_mean": sum(v[1] for v in sessions.values()) / k,
            "minutes_mean": sum(v[2] for v in sessions.values()) / k / 60,
        }
    return result


def catalogs():
    out = []
    for story in STORIES:
        for q in range(4):
            out.append({"story_id": story, "question_index": q,
                        "aspects": [{"aspect_id": i, "description": "aspect %d of %s q%d" % (i, story, q)}
                                    for i in range(1, 5)]})
    return out


if __name__ == "__main__":
    data = rows()
    if len(sys.argv) > 1:
        target = sys.argv[1]
        with open(os.path.join(target, "responses.json"), "w") as f:
            json.dump(data, f, indent=2)
            f.write("\n")
        for story in STORIES:
            with open(os.path.join(target, "aspects", story + ".json"), "w") as f:
                json.dump([c for c in catalogs() if c["story_id"] == story], f, indent=2)
                f.write("\n")
    for kind, m in metrics(data).items():
        print(kind, json.dumps(m))
