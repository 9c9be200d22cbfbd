"""A small hand-written corpus shared by the demo scripts.

Running this file writes it out as the three JSONL inputs the ``qedb build``
command expects, under ``demos/data/``.
"""

from pathlib import Path

from qedb import EntityLink, Passage, QaRecord, ReferencePair, Span
from qedb.ingest import corpus_from_items, encode_link, encode_passage, encode_record, write_jsonl

PASSAGES = [
    Passage("velvet", "Tipping the Velvet is a 2002 BBC drama serial based on the novel by Sarah Waters. "
            "Keeley Hawes plays Kitty Butler."),
    Passage("waters", "Sarah Waters is a Welsh novelist, born in Neyland in 1966."),
    Passage("lucretius", "Lucretius was a Roman poet and philosopher, the best known Roman proponent of "
            "hedonism in the Epicurean tradition."),
    Passage("nature", "On the Nature of Things is a didactic poem by Lucretius on atomism."),
    Passage("grates", "Please Leave the Grates is a song by the Australian rock band Jebediah."),
    Passage("jebediah", "Jebediah are an alternative rock band formed in Perth in 1994 by Kevin Mitchell."),
    Passage("cup", "England won the 1966 World Cup at Wembley."),
    Passage("nobel", "The first Nobel Prize in Physics was awarded in 1901 to Wilhelm Conrad Röntgen."),
]

# (record id, doc id, question, answer, [(question ref, passage ref, align confidence)])
QUESTIONS = [
    ("q01", "velvet", "what is the tv series tipping the velvet based on", "the novel by Sarah Waters",
     [("the tv series tipping the velvet", "Tipping the Velvet", 0.9)]),
    ("q02", "velvet", "who plays kitty in tipping the velvet", "Keeley Hawes",
     [("kitty", "Kitty Butler", 0.8), ("tipping the velvet", "Tipping the Velvet", 0.95)]),
    ("q03", "velvet", "who wrote the novel tipping the velvet is based on", "Sarah Waters",
     [("tipping the velvet", "Tipping the Velvet", 0.9)]),
    ("q04", "waters", "where was sarah waters born", "Neyland",
     [("sarah waters", "Sarah Waters", 0.95)]),
    ("q05", "waters", "when was sarah waters born", "1966",
     [("sarah waters", "Sarah Waters", 0.95)]),
    ("q06", "lucretius", "who was the roman proponent of hedonism", "Lucretius",
     [("hedonism", "hedonism", 0.9)]),
    ("q07", "nature", "what is the name of lucretius's book on atomism", "On the Nature of Things",
     [("lucretius", "Lucretius", 0.8)]),
    ("q08", "grates", "who sings the song please leave the grates", "Jebediah",
     [("the song please leave the grates", "Please Leave the Grates", 0.9)]),
    ("q09", "jebediah", "when was jebediah formed and by whom", "1994",
     [("jebediah", "Jebediah", 0.85)]),
    ("q11", "cup", "who won the world cup in 1966", "England",
     [("1966", "1966", 0.9)]),
    ("q10", "nobel", "who got the first nobel prize in physics", "Wilhelm Conrad Röntgen",
     [("the first nobel prize in physics", "The first Nobel Prize in Physics", 0.9)]),
]

# (doc id, mention text, entity id, canonical name, link confidence)
LINKS = [
    ("velvet", "Tipping the Velvet", "Q_ttv", "Tipping the Velvet (TV series)", 0.9),
    ("velvet", "Sarah Waters", "Q_waters", "Sarah Waters", 0.95),
    ("velvet", "Keeley Hawes", "Q_hawes", "Keeley Hawes", 0.9),
    ("velvet", "Kitty Butler", "Q_kitty", "Kitty Butler", 0.6),
    ("waters", "Sarah Waters", "Q_waters", "Sarah Waters", 0.95),
    ("waters", "Neyland", "Q_neyland", "Neyland", 0.8),
    ("waters", "1966", "Q_1966", "1966", 0.9),
    ("lucretius", "Lucretius", "Q_lucretius", "Lucretius", 0.9),
    ("lucretius", "hedonism", "Q_hedonism", "Hedonism", 0.7),
    ("nature", "On the Nature of Things", "Q_ontt", "De rerum natura", 0.9),
    ("nature", "Lucretius", "Q_lucretius", "Lucretius", 0.9),
    ("grates", "Please Leave the Grates", "Q_grates", "Please Leave the Grates", 0.6),
    ("grates", "Jebediah", "Q_jebediah", "Jebediah (band)", 0.9),
    ("jebediah", "Jebediah", "Q_jebediah", "Jebediah (band)", 0.9),
    ("jebediah", "1994", "Q_1994", "1994", 0.9),
    ("cup", "1966", "Q_1966", "1966", 0.9),
    ("cup", "England", "Q_england", "England national football team", 0.8),
    ("nobel", "Wilhelm Conrad Röntgen", "Q_rontgen", "Wilhelm Röntgen", 0.95),
]


def _span(text: str, part: str) -> Span:
    start = text.index(part)
    return Span(start, start + len(part), part)


def records():
    docs = {p.doc_id: p.text for p in PASSAGES}
    out = []
    for rid, doc, question, answer, refs in QUESTIONS:
        pairs = tuple(ReferencePair(_span(question, q), _span(docs[doc], d), conf) for q, d, conf in refs)
        out.append(QaRecord(rid, question, doc, _span(docs[doc], answer), pairs))
    return out


def links():
    docs = {p.doc_id: p.text for p in PASSAGES}
    return [EntityLink(doc, _span(docs[doc], m), eid, name, conf) for doc, m, eid, name, conf in LINKS]


def load():
    return corpus_from_items(PASSAGES, records(), links())


if __name__ == "__main__":
    out = Path(__file__).parent / "data"
    out.mkdir(exist_ok=True)
    write_jsonl(out / "passages.jsonl", map(encode_passage, PASSAGES))
    write_jsonl(out / "qa.jsonl", map(encode_record, records()))
    write_jsonl(out / "links.jsonl", map(encode_link, links()))
    print(f"wrote inputs to {out}")
