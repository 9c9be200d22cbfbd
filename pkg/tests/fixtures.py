"""Hand-transcribed and synthetic corpora used across the test suite.

Offsets are computed with ``str.find`` so fixtures read as plain text.
"""

from __future__ import annotations

import random
from typing import Dict, List, Optional, Sequence, Tuple

from qedb.ingest import Corpus, corpus_from_items
from qedb.model import EntityLink, Passage, QaRecord, ReferencePair, Span


def span_of(host: str, text: str, occurrence: int = 0) -> Span:
    start = -1
    for _ in range(occurrence + 1):
        start = host.find(text, start + 1)
        if start < 0:
            raise ValueError(f"{text!r} (occurrence {occurrence}) not in {host!r}")
    return Span(start, start + len(text), text)


def qa(
    record_id: str,
    passage: Passage,
    question: str,
    answer: str,
    refs: Sequence[tuple] = (),
    answer_occurrence: int = 0,
    entities: Optional[Sequence[Sequence[str]]] = None,
) -> QaRecord:
    """``refs`` items are ``(q_text, d_text[, align_conf[, d_occurrence]])``."""
    pairs = []
    for ref in refs:
        q_text, d_text = ref[0], ref[1]
        conf = ref[2] if len(ref) > 2 else 1.0
        occ = ref[3] if len(ref) > 3 else 0
        pairs.append(ReferencePair(span_of(question, q_text), span_of(passage.text, d_text, occ), conf))
    pairs.sort(key=lambda p: p.q_span.start)
    qents = tuple(frozenset(e) for e in entities) if entities is not None else tuple(frozenset() for _ in pairs)
    return QaRecord(
        record_id=record_id,
        question=question,
        doc_id=passage.doc_id,
        answer=span_of(passage.text, answer, answer_occurrence),
        references=tuple(pairs),
        question_entities=qents,
    )


def link(passage: Passage, mention: str, entity_id: str, name: str, conf: float, occurrence: int = 0) -> EntityLink:
    return EntityLink(passage.doc_id, span_of(passage.text, mention, occurrence), entity_id, name, conf)


# -- one document, four questions about Tipping the Velvet --------------------

VELVET_DOC = Passage(
    "d1",
    "Tipping the Velvet is a 2002 BBC drama serial based on a 1998 novel of the same name "
    "by Sarah Waters. It stars Rachael Stirling as Nancy Astley and Keeley Hawes as Kitty Butler.",
    "Tipping the Velvet (TV serial)",
)


def velvet_records() -> List[QaRecord]:
    d = VELVET_DOC
    return [
        qa(
            "velvet-q1",
            d,
            "what is the tv series tipping the velvet based on",
            "a 1998 novel of the same name by Sarah Waters",
            [("the tv series tipping the velvet", "Tipping the Velvet", 0.95)],
        ),
        qa(
            "velvet-q2",
            d,
            "when was tipping the velvet first shown on tv",
            "2002",
            [("tipping the velvet", "Tipping the Velvet", 0.9)],
        ),
        qa(
            "velvet-q3",
            d,
            "who plays nancy astley in tipping the velvet",
            "Rachael Stirling",
            [("nancy astley", "Nancy Astley", 0.9), ("tipping the velvet", "Tipping the Velvet", 0.85)],
        ),
        qa(
            "velvet-q4",
            d,
            "what channel aired the adaptation of the 1998 novel by sarah waters",
            "BBC",
            [("the 1998 novel by sarah waters", "a 1998 novel of the same name by Sarah Waters", 0.8)],
        ),
    ]


def velvet_corpus() -> Corpus:
    return corpus_from_items([VELVET_DOC], velvet_records(), [])


# -- three documents, eight questions about the TV drama ----------------------

DRAMA_DOCS = [
    Passage(
        "d1",
        "Tipping the Velvet is a 2002 BBC drama serial based on the 1998 novel by Sarah Waters. "
        "Rachael Stirling stars as Nancy Astley and Keeley Hawes plays Kitty Butler, a music hall "
        "male impersonator.",
    ),
    Passage(
        "d2",
        "Sarah Waters is a Welsh novelist. Her debut novel, Tipping the Velvet, was published in "
        "1998 and follows the oyster girl Nancy Astley.",
    ),
    Passage(
        "d3",
        "Rachael Stirling is an English actress. She played Nancy Astley in the BBC series Tipping "
        "the Velvet, opposite Keeley Hawes as Kitty Butler.",
    ),
]

TTV, KB, SW, RS, KH, NA = "Q_ttv", "Q_kitty", "Q_waters", "Q_stirling", "Q_hawes", "Q_astley"


def drama_records() -> List[QaRecord]:
    d1, d2, d3 = DRAMA_DOCS
    return [
        qa("dr-01", d1, "what is the tv series tipping the velvet based on", "the 1998 novel by Sarah Waters",
           [("the tv series tipping the velvet", "Tipping the Velvet", 0.9)]),
        qa("dr-02", d1, "who plays kitty in tipping the velvet", "Keeley Hawes",
           [("kitty", "Kitty Butler", 0.8), ("tipping the velvet", "Tipping the Velvet", 0.9)]),
        qa("dr-03", d1, "when was tipping the velvet first broadcast", "2002",
           [("tipping the velvet", "Tipping the Velvet", 0.9)]),
        qa("dr-04", d2, "what nationality is sarah waters", "Welsh",
           [("sarah waters", "Sarah Waters", 1.0)]),
        qa("dr-05", d2, "what was the debut novel of sarah waters", "Tipping the Velvet",
           [("sarah waters", "Sarah Waters", 0.95)]),
        qa("dr-06", d2, "when was tipping the velvet published", "1998",
           [("tipping the velvet", "Tipping the Velvet", 0.9)]),
        qa("dr-07", d3, "who does rachael stirling play in the tv series tipping the velvet", "Nancy Astley",
           [("rachael stirling", "Rachael Stirling", 0.9),
            ("the tv series tipping the velvet", "Tipping the Velvet", 0.85)]),
        qa("dr-08", d3, "what is the nationality of rachael stirling", "English",
           [("rachael stirling", "Rachael Stirling", 0.95)]),
    ]


def drama_links() -> List[EntityLink]:
    d1, d2, d3 = DRAMA_DOCS
    return [
        link(d1, "Tipping the Velvet", TTV, "Tipping the Velvet", 0.9),
        link(d1, "Sarah Waters", SW, "Sarah Waters", 0.95),
        link(d1, "Rachael Stirling", RS, "Rachael Stirling", 0.9),
        link(d1, "Nancy Astley", NA, "Nancy Astley", 0.6),
        link(d1, "Keeley Hawes", KH, "Keeley Hawes", 0.9),
        link(d1, "Kitty Butler", KB, "Kitty Butler", 0.8),
        link(d2, "Sarah Waters", SW, "Sarah Waters", 0.95),
        link(d2, "Tipping the Velvet", TTV, "Tipping the Velvet", 0.85),
        link(d2, "Nancy Astley", NA, "Nancy Astley", 0.6),
        link(d3, "Rachael Stirling", RS, "Rachael Stirling", 0.9),
        link(d3, "Nancy Astley", NA, "Nancy Astley", 0.7),
        link(d3, "Tipping the Velvet", TTV, "Tipping the Velvet", 0.9),
        link(d3, "Keeley Hawes", KH, "Keeley Hawes", 0.9),
        link(d3, "Kitty Butler", KB, "Kitty Butler", 0.8),
    ]


def drama_corpus() -> Corpus:
    return corpus_from_items(DRAMA_DOCS, drama_records(), drama_links())


# -- bridge joins: Lucretius and Jebediah ---------------------------------------

BRIDGE_DOCS = [
    Passage("lucretius-1", "Lucretius was a Roman poet and philosopher, the best known Roman proponent of "
            "hedonism in the Epicurean tradition."),
    Passage("lucretius-2", "On the Nature of Things is a didactic poem by Lucretius on atomism and "
            "Epicurean physics."),
    Passage("jebediah-1", "Please Leave the Grates is a song by the Australian rock band Jebediah."),
    Passage("jebediah-2", "Jebediah are an alternative rock band formed in Perth in 1994 by Kevin Mitchell "
            "and Chris Daymond."),
]

LUC, ONTT, HED, ATOM = "Q_lucretius", "Q_nature_of_things", "Q_hedonism", "Q_atomism"
JEB, PLG, PERTH, Y1994 = "Q_jebediah", "Q_grates", "Q_perth", "Q_1994"


def bridge_records() -> List[QaRecord]:
    l1, l2, j1, j2 = BRIDGE_DOCS
    return [
        qa("br-luc-1", l1, "who was the roman proponent of hedonism", "Lucretius",
           [("hedonism", "hedonism", 0.9)]),
        qa("br-luc-2", l2, "what is the name of lucretius's book on atomism", "On the Nature of Things",
           [("lucretius", "Lucretius", 0.8)]),
        qa("br-jeb-1", j1, "who sings the song please leave the grates", "Jebediah",
           [("the song please leave the grates", "Please Leave the Grates", 0.9)]),
        qa("br-jeb-2", j2, "when was jebediah formed and by whom", "1994",
           [("jebediah", "Jebediah", 0.85)]),
    ]


def bridge_links() -> List[EntityLink]:
    l1, l2, j1, j2 = BRIDGE_DOCS
    return [
        link(l1, "Lucretius", LUC, "Lucretius", 0.9),
        link(l1, "hedonism", HED, "Hedonism", 0.7),
        link(l2, "On the Nature of Things", ONTT, "De rerum natura", 0.9),
        link(l2, "Lucretius", LUC, "Lucretius", 0.9),
        link(l2, "atomism", ATOM, "Atomism", 0.6),
        link(j1, "Please Leave the Grates", PLG, "Please Leave the Grates", 0.6),
        link(j1, "Jebediah", JEB, "Jebediah (band)", 0.9),
        link(j2, "Jebediah", JEB, "Jebediah (band)", 0.9),
        link(j2, "Perth", PERTH, "Perth", 0.8),
        link(j2, "1994", Y1994, "1994", 0.9),
    ]


def bridge_corpus() -> Corpus:
    return corpus_from_items(BRIDGE_DOCS, bridge_records(), bridge_links())


# -- related entities of Tonga ---------------------------------------------------

TONGA = "Q_tonga"


def tonga_corpus() -> Corpus:
    """Questions answered by Tonga whose references link to other entities.

    The year 1976 is mentioned by three questions, so it would rank first
    if years were kept.  New Zealand is linked only at confidence 0.2.
    """
    rows = [
        # (passage text, question, [(q ref, d ref, entity, name, link conf)])
        ("In 1976 the Peace Corps volunteer Deborah Gardner was murdered in Tonga.",
         "in which country was deborah gardner murdered by the peace corps in 1976",
         [("deborah gardner", "Deborah Gardner", "Q_gardner", "Deborah Ann Gardner", 0.8),
          ("1976", "1976", "Q_1976", "1976", 0.7)]),
        ("The sulu came to Fiji from Tonga.",
         "where did the sulu come from in fiji",
         [("fiji", "Fiji", "Q_fiji", "Fiji", 0.9)]),
        ("American Samoa won their first ever World Cup match against Tonga.",
         "what country did american samoa defeat to win their first ever world cup",
         [("american samoa", "American Samoa", "Q_am_samoa", "American Samoa", 0.9)]),
        ("In 2011 American Samoa lost to Tonga.",
         "what country did american samoa lose to in 2011",
         [("american samoa", "American Samoa", "Q_am_samoa", "American Samoa", 0.85),
          ("2011", "2011", "Q_2011", "2011", 0.8)]),
        ("In 2006 Australian troops and New Zealand police were sent to Tonga.",
         "in 2006, australian troops and new zealand police were sent to which island",
         [("new zealand", "New Zealand", "Q_nz", "New Zealand", 0.2)]),
        ("Samoa played Tonga in the Under 20 World Cup.",
         "who did samoa play in the under 20 world cup",
         [("samoa", "Samoa", "Q_samoa", "Samoa", 0.9)]),
        ("Niuatoputapu is the highest point of Tonga, a Pacific island nation.",
         "niuatoputapu is the highest point in which pacific island nation",
         [("niuatoputapu", "Niuatoputapu", "Q_niua", "Niuatoputapu", 0.9)]),
        ("The 1976 South Pacific Games were hosted by Tonga.",
         "which island nation hosted the 1976 south pacific games",
         [("1976", "1976", "Q_1976", "1976", 0.9)]),
        ("Tonga rejoined the Commonwealth in 1976.",
         "which kingdom rejoined the commonwealth in 1976",
         [("1976", "1976", "Q_1976", "1976", 0.9)]),
    ]
    passages, records, links = [], [], []
    for i, (text, question, refs) in enumerate(rows, start=1):
        p = Passage(f"tonga-{i}", text)
        passages.append(p)
        records.append(qa(f"tonga-q{i:02d}", p, question, "Tonga", [(q, d, 0.9) for q, d, *_ in refs]))
        links.append(link(p, "Tonga", TONGA, "Tonga", 0.9))
        for _, d, eid, name, conf in refs:
            links.append(link(p, d, eid, name, conf))
    return corpus_from_items(passages, records, links)


# -- frame and shared-answer queries (Riverfront Stadium) ------------------------

STADIUM = "Q_riverfront"


def stadium_corpus() -> Corpus:
    p1 = Passage("rf-1", "The Cincinnati Bengals used to play at Riverfront Stadium.")
    p2 = Passage("rf-2", "The Cincinnati Reds played their last game at Riverfront Stadium in 2002.")
    p3 = Passage("rf-3", "The Cincinnati Reds played their last game in 2002 at Riverfront Stadium.")
    p4 = Passage("rf-4", "In the American Football League the Bengals played at Riverfront Stadium.")
    p5 = Passage("rf-5", "The Cincinnati Bengals moved to Riverfront Stadium in 1970.")
    records = [
        qa("rf-q1", p1, "what nfl team used to play at riverfront stadium", "Cincinnati Bengals",
           [("riverfront stadium", "Riverfront Stadium", 0.9)]),
        qa("rf-q2", p2, "what baseball team played their last game at riverfront stadium", "Cincinnati Reds",
           [("riverfront stadium", "Riverfront Stadium", 0.9)]),
        qa("rf-q3", p3, "where did the cincinnati reds play their last game", "Riverfront Stadium",
           [("the cincinnati reds", "The Cincinnati Reds", 0.9)]),
        qa("rf-q4", p4, "where did the bengals play in the american football league", "Riverfront Stadium",
           [("the bengals", "the Bengals", 0.9)]),
        qa("rf-q5", p5, "what nfl team used to play at riverfront stadium", "Cincinnati Bengals",
           [("riverfront stadium", "Riverfront Stadium", 0.9)]),
    ]
    links = [
        link(p1, "Riverfront Stadium", STADIUM, "Riverfront Stadium", 0.9),
        link(p1, "Cincinnati Bengals", "Q_bengals", "Cincinnati Bengals", 0.9),
        link(p2, "Riverfront Stadium", STADIUM, "Riverfront Stadium", 0.9),
        link(p2, "Cincinnati Reds", "Q_reds", "Cincinnati Reds", 0.9),
        link(p3, "Riverfront Stadium", STADIUM, "Riverfront Stadium", 0.9),
        link(p3, "Cincinnati Reds", "Q_reds", "Cincinnati Reds", 0.9),
        link(p4, "Riverfront Stadium", STADIUM, "Riverfront Stadium", 0.8),
        link(p4, "Bengals", "Q_bengals", "Cincinnati Bengals", 0.7),
        link(p5, "Riverfront Stadium", STADIUM, "Riverfront Stadium", 0.9),
        link(p5, "Cincinnati Bengals", "Q_bengals", "Cincinnati Bengals", 0.9),
    ]
    return corpus_from_items([p1, p2, p3, p4, p5], records, links)


# -- one-hop QA -----------------------------------------------------------------


def nobel_corpus() -> Corpus:
    p1 = Passage("nobel-1", "The first Nobel Prize in Physics was awarded in 1901 to Wilhelm Conrad Röntgen, "
                 "for his discovery of X-rays.")
    p2 = Passage("nobel-2", "Marie Curie was the first woman to win a Nobel Prize.")
    p3 = Passage("nobel-3", "The Nobel Prize in Physics is awarded by the Royal Swedish Academy of Sciences.")
    p4 = Passage("nobel-4", "Albert Einstein received the Nobel Prize in Physics in 1921.")
    records = [
        qa("nb-1", p1, "who got the first nobel prize in physics", "Wilhelm Conrad Röntgen",
           [("the first nobel prize in physics", "The first Nobel Prize in Physics", 0.9)]),
        qa("nb-2", p2, "who was the first woman to win a nobel prize", "Marie Curie",
           [("a nobel prize", "a Nobel Prize", 0.8)]),
        qa("nb-3", p3, "who awards the nobel prize in physics", "the Royal Swedish Academy of Sciences",
           [("the nobel prize in physics", "The Nobel Prize in Physics", 0.9)]),
        qa("nb-4", p4, "when did albert einstein receive the nobel prize in physics", "1921",
           [("albert einstein", "Albert Einstein", 0.9)]),
        qa("nb-5", p1, "when was the first nobel prize in physics awarded", "1901",
           [("the first nobel prize in physics", "The first Nobel Prize in Physics", 0.9)]),
    ]
    return corpus_from_items([p1, p2, p3, p4], records, [])


# -- synthetic corpora -----------------------------------------------------------

_FIRST = ["alder", "birch", "cedar", "dunmore", "elkhorn", "fenwick", "garland", "hollins", "ironwood",
          "juniper", "kessler", "larkspur", "marlow", "norwood", "oakhurst", "pembroke", "quarry",
          "redfern", "stanton", "thornbury", "upton", "valemont", "winslow", "yardley"]
_SECOND = ["bay", "castle", "river", "abbey", "forest", "harbor", "college", "museum", "valley", "tower"]
_YEARS = ["1976", "1996", "2011", "1848"]
_VERBS = ["borders", "founded", "owns", "faces", "replaced", "hosts", "absorbed", "named"]


def synthetic_corpus(n_records: int, seed: int, n_entities: int = 30) -> Tuple[Corpus, Dict[str, str]]:
    """Random multi-document corpus with linked answers and references.

    Some answers contain two linked entities, some references link at low
    confidence, alignments vary around 2/3, and some questions mention
    other entities' names so that the answer-not-in-question rule bites.
    Returns the corpus and an entity id -> name table.
    """
    rng = random.Random(seed)
    names: List[str] = []
    while len(names) < n_entities - len(_YEARS):
        cand = f"{rng.choice(_FIRST).title()} {rng.choice(_SECOND).title()}"
        if cand not in names:
            names.append(cand)
    names += _YEARS
    ents = {f"E{i:03d}": name for i, name in enumerate(names)}
    ids = sorted(ents)
    # a skewed popularity so some bridges are far more common than others
    weights = [1.0 / (1 + i) ** 0.7 for i in range(len(ids))]

    passages, records, links = [], [], []
    for j in range(n_records):
        pick = lambda k: rng.choices(ids, weights=weights, k=k)
        answer_ids = list(dict.fromkeys(pick(2 if rng.random() < 0.12 else 1)))
        if rng.random() < 0.1:
            answer_ids = []
        arity = rng.choices([0, 1, 2], weights=[1, 6, 2])[0]
        ref_ids = []
        while len(ref_ids) < arity:
            e = pick(1)[0]
            if e not in ref_ids and e not in answer_ids:
                ref_ids.append(e)
        answer_text = " and ".join(ents[e] for e in answer_ids) if answer_ids else f"Thing {j}"
        ref_texts = [ents[e] for e in ref_ids]
        body = " near ".join(ref_texts) if ref_texts else "nothing"
        text = f"Record {j}: {answer_text} {rng.choice(_VERBS)} {body}."
        p = Passage(f"syn-{seed}-{j:04d}", text)
        passages.append(p)

        extra = ""
        if rng.random() < 0.15:
            extra = " unlike " + ents[rng.choice(ids)].lower()
        q_refs = " and ".join(t.lower() for t in ref_texts) if ref_texts else "it"
        question = f"what {rng.choice(_VERBS)} {q_refs}{extra} in case {j}"
        conf_choices = [0.5, 0.6, 2 / 3, 0.7, 0.8, 0.9, 1.0]
        refs = []
        for t in ref_texts:
            refs.append((t.lower(), t, rng.choice(conf_choices)))
        records.append(qa(f"syn-{seed}-{j:04d}", p, question, answer_text, refs))

        link_confs = [0.1, 0.3, 0.5, 0.7, 0.9, 1.0]
        for e in answer_ids:
            links.append(link(p, ents[e], e, ents[e], rng.choice(link_confs)))
        for e, t in zip(ref_ids, ref_texts):
            if rng.random() < 0.9:
                links.append(link(p, t, e, ents[e], rng.choice(link_confs)))
    return corpus_from_items(passages, records, links), ents


_WH = ["who", "what", "where", "when", "which", "how"]
_V2 = ["founded", "painted", "wrote", "directed", "discovered", "designed", "built", "won", "hosted",
       "invented", "composed", "named", "replaced", "coached", "funded", "sang", "produced", "launched"]
_N2 = ["bridge", "opera", "novel", "festival", "treaty", "stadium", "comet", "album", "cathedral",
       "railway", "championship", "telescope", "symphony", "expedition", "vaccine", "museum", "canal",
       "satellite", "magazine", "dynasty", "orchestra", "monastery", "reactor", "lighthouse"]
_P2 = ["paris", "lagos", "quito", "osaka", "perth", "tonga", "fiji", "oslo", "cairo", "lima", "dakar",
       "hanoi", "nairobi", "riga", "tunis", "sofia", "kabul", "minsk", "accra", "doha", "baku", "male"]
_A2 = ["first", "largest", "oldest", "famous", "northern", "royal", "modern", "ancient", "national",
       "coastal", "eastern", "hidden"]


def synthetic_questions(n: int, seed: int) -> List[str]:
    """Distinct questions without repeated tokens, for retrieval tests."""
    rng = random.Random(seed)
    out, seen = [], set()
    while len(out) < n:
        q = f"{rng.choice(_WH)} {rng.choice(_V2)} the {rng.choice(_A2)} {rng.choice(_N2)} in {rng.choice(_P2)}"
        if rng.random() < 0.4:
            q += f" {rng.choice(['during', 'before', 'after'])} {rng.randint(1700, 2020)}"
        toks = q.split()
        if len(set(toks)) != len(toks) or q in seen:
            continue
        seen.add(q)
        out.append(q)
    return out


def question_corpus(questions: Sequence[str]) -> Corpus:
    passages, records = [], []
    for i, q in enumerate(questions):
        p = Passage(f"qc-{i:05d}", f"Answer {i} is here.")
        passages.append(p)
        records.append(qa(f"qc-{i:05d}", p, q, f"Answer {i}"))
    return corpus_from_items(passages, records, [])
