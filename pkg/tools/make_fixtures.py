#!/usr/bin/env python3
"""Regenerate the shipped fixtures: graph dump, eval dataset, scripted
provider script and offline config. Run from the repo root."""

import json
import os

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..")
FIXTURES = os.path.join(ROOT, "fixtures")

GRAPH = [
    {"kind": "node", "id": 0, "labels": ["AS"], "props": {"asn": 2497, "name": "IIJ"}},
    {"kind": "node", "id": 1, "labels": ["Country"], "props": {"country_code": "JP", "name": "Japan"}},
    {"kind": "node", "id": 2, "labels": ["AS"], "props": {"asn": 3333, "name": "RIPE NCC"}},
    {"kind": "node", "id": 3, "labels": ["Country"], "props": {"country_code": "NL"}},
    {"kind": "node", "id": 4, "labels": ["AS"], "props": {"asn": 15169, "name": "Google"}},
    {"kind": "node", "id": 5, "labels": ["Prefix"], "props": {"prefix": "8.8.8.0/24"}},
    {"kind": "node", "id": 6, "labels": ["Country"], "props": {"country_code": "US"}},
    {"kind": "edge", "id": 0, "type": "POPULATION", "from": 0, "to": 1, "props": {"percent": 52.0}},
    {"kind": "edge", "id": 1, "type": "COUNTRY", "from": 0, "to": 1, "props": {}},
    {"kind": "edge", "id": 2, "type": "COUNTRY", "from": 2, "to": 3, "props": {}},
    {"kind": "edge", "id": 3, "type": "ORIGINATE", "from": 4, "to": 5, "props": {}},
    {"kind": "edge", "id": 4, "type": "COUNTRY", "from": 4, "to": 6, "props": {}},
    {"kind": "edge", "id": 5, "type": "POPULATION", "from": 2, "to": 3, "props": {"percent": 4.0}},
]

Q1_CYPHER = (
    "MATCH (:AS {asn:2497})-[p:POPULATION]-(:Country {country_code:'JP'}) "
    "RETURN p.percent"
)

# id, question, gold cypher, difficulty, domain, system answer, reference,
# (factuality, relevance, informativeness) judge ratings
RECORDS = [
    ("q01", "What is the percentage of Japan's population in AS2497?",
     Q1_CYPHER, "easy", "technical",
     "52.0 percent of Japan's population is served by AS2497.",
     "52.0 percent of Japan's population is served by AS2497.",
     (5, 5, 5)),
    ("q02", "How many autonomous systems are in the graph?",
     "MATCH (a:AS) RETURN count(a)", "easy", "technical",
     "The graph contains 3 autonomous systems.",
     "There are 3 autonomous systems in the graph.",
     (1, 3, 5)),
    ("q03", "Which country is AS2497 registered in?",
     "MATCH (:AS {asn:2497})-[:COUNTRY]-(c:Country) RETURN c.country_code",
     "easy", "general",
     "AS2497 is registered in JP.",
     "AS2497 is registered in JP.",
     (5, 5, 5)),
    ("q04", "What is the name of AS2497?",
     "MATCH (a:AS {asn:2497}) RETURN a.name", "easy", "general",
     "AS2497 is named IIJ.",
     "The name of AS2497 is IIJ.",
     (4, 4, 4)),
    ("q05", "Which prefixes does AS15169 originate?",
     "MATCH (:AS {asn:15169})-[:ORIGINATE]-(p:Prefix) RETURN p.prefix",
     "medium", "technical",
     "AS15169 originates 8.8.8.0/24.",
     "AS15169 originates 8.8.8.0/24.",
     (5, 5, 5)),
    ("q06", "What percent of the Dutch population uses AS3333?",
     "MATCH (:AS {asn:3333})-[p:POPULATION]-(:Country {country_code:'NL'}) RETURN p.percent",
     "medium", "technical",
     "About 4.0 percent of the Dutch population uses AS3333.",
     "4.0 percent of the Dutch population uses AS3333.",
     (4, 5, 3)),
    ("q07", "How many countries are in the graph?",
     "MATCH (c:Country) RETURN count(c)", "medium", "general",
     "There are 3 countries in the graph.",
     "There are 3 countries in the graph.",
     (5, 5, 5)),
    ("q08", "Which AS names are registered in Japan?",
     "MATCH (a:AS)-[:COUNTRY]-(:Country {country_code:'JP'}) RETURN a.name",
     "medium", "general",
     "IIJ is registered in Japan.",
     "IIJ is registered in Japan.",
     (5, 5, 4)),
    ("q09", "Which country code is associated with the AS that originates 8.8.8.0/24?",
     "MATCH (c:Country)-[:COUNTRY]-(a:AS)-[:ORIGINATE]-(:Prefix {prefix:'8.8.8.0/24'}) "
     "RETURN c.country_code",
     "hard", "technical",
     "US.",
     "The country code is US.",
     (3, 4, 2)),
    ("q10", "What is the average population percent across all POPULATION relationships?",
     "MATCH (:AS)-[p:POPULATION]-(:Country) RETURN avg(p.percent)", "hard", "technical",
     "The average is 28.0 percent.",
     "The average population percent is 28.0.",
     (4, 4, 4)),
    ("q11", "Which AS names exist, ordered alphabetically?",
     "MATCH (a:AS) RETURN a.name ORDER BY a.name", "hard", "general",
     "The AS names are Google, IIJ and RIPE NCC.",
     "Google, IIJ and RIPE NCC.",
     (3, 3, 3)),
    ("q12", "How many relationships link ASes to countries?",
     "MATCH (:AS)-[r:COUNTRY]-(:Country) RETURN count(r)", "hard", "general",
     "3 relationships link ASes to countries.",
     "3 relationships link ASes to countries.",
     (2, 3, 4)),
]


def main():
    os.makedirs(FIXTURES, exist_ok=True)

    with open(os.path.join(FIXTURES, "iyp_fixture.ndjson"), "w") as fh:
        for obj in GRAPH:
            fh.write(json.dumps(obj) + "\n")

    with open(os.path.join(FIXTURES, "dev_dataset.jsonl"), "w") as fh:
        for rid, question, gold, difficulty, domain, _, _, _ in RECORDS:
            fh.write(json.dumps({
                "id": rid,
                "question": question,
                "gold_cypher": gold,
                "difficulty": difficulty,
                "domain": domain,
            }) + "\n")

    entries = []
    for rid, question, gold, _, _, answer, reference, ratings in RECORDS:
        qmark = f"Question: {question}"
        entries.append({
            "match_all": ["Translate the question", qmark],
            "response": f"```cypher\n{gold}\n```",
        })
        entries.append({
            "match_all": ["Write a reference answer", qmark],
            "response": reference,
        })
        entries.append({
            "match_all": ["numbered context", qmark],
            "response": json.dumps({"answer": answer, "cypher": gold}),
        })
        for criterion, rating in zip(
            ("factuality", "relevance", "informativeness"), ratings
        ):
            entries.append({
                "match_all": [f"Criterion: {criterion}", qmark],
                "response": f"Rating: {rating}",
            })

    with open(os.path.join(FIXTURES, "scripted.json"), "w") as fh:
        json.dump(
            {"seed": 7, "dim": 8, "provider_id": "scripted-fixture", "entries": entries},
            fh, indent=2,
        )
        fh.write("\n")

    config = {
        "graph": {"ndjson": "iyp_fixture.ndjson"},
        "provider": {"kind": "scripted", "script": "scripted.json"},
        "index": {"include_neighbors": False},
        "retrieval": {"min_rows": 1, "k": 5, "rerank_above": 5, "top_n": 5,
                      "batch_size": 64},
        "eval": {"parallelism": 2},
        "server": {"host": "127.0.0.1", "port": 8000, "cors_origins": ["*"]},
    }
    with open(os.path.join(FIXTURES, "chatiyp.scripted.json"), "w") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")

    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
