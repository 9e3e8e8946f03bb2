"""Regenerates the bundled fixture corpus, reference corpus and question files.

Each story has twelve full sources and one paywalled source. Every full
source states the story's two key facts in one of four phrasings, so the
same questions are answered by most sources with differing answers.
"""
import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))

DOMAINS = ["dailyledger.com", "metrowire.net", "thecourier.org", "capitalpost.com", "northstar.news",
           "harborgazette.com", "plainsherald.com", "eveningtimes.co", "riverbend.org", "summitreport.com",
           "coastalvoice.net", "granitejournal.com"]

STORIES = [
    {
        "story_id": "fed-raises-rates",
        "title": "Fed raises rates again",
        "retrieved_at": "2022-08-02T10:00:00Z",
        "facts": [
            ["The Fed raised rates because inflation peaked.",
             "As it had said it would do, the Fed raised its rates once more.",
             "Rates were raised by the Fed to cool hiring.",
             "Fed officials raised rates for a fourth time."],
            ["Stocks fell because bonds rallied.",
             "As many had feared it would, the stock market fell.",
             "Stocks fell on the news.",
             "It was a day when stocks fell sharply."],
        ],
        "filler": "{name} readers wrote in about mortgages, savings accounts and car loans after the announcement.",
        "questions": ["Why did the central bank raise interest rates?",
                      "How did the stock market react?",
                      "What did officials say about future increases?",
                      "Who is most affected by higher borrowing costs?"],
    },
    {
        "story_id": "storm-closes-schools",
        "title": "Storm closes schools across the region",
        "retrieved_at": "2022-09-14T07:30:00Z",
        "facts": [
            ["The city closed schools because the storm hit.",
             "As it had warned it would, the city closed its schools again.",
             "Schools were closed by the city to keep kids safe.",
             "City officials closed schools for a second day."],
            ["Flights stopped because winds rose.",
             "As many had feared they would, the flights stopped.",
             "Flights stopped at noon.",
             "It was a day when flights stopped entirely."],
        ],
        "filler": "{name} photographers followed crews clearing fallen branches from streets and parks overnight.",
        "questions": ["Why were schools closed?",
                      "What happened to air travel?",
                      "How long are closures expected to last?",
                      "What should residents do to prepare?"],
    },
    {
        "story_id": "council-passes-budget",
        "title": "Council passes budget after long debate",
        "retrieved_at": "2022-06-21T18:45:00Z",
        "facts": [
            ["The council approved the budget because taxes fell.",
             "As it had said it would do, the council approved its budget once more.",
             "The budget was approved by the council to fund parks.",
             "Council members approved the budget for a third year."],
            ["Prices rose because demand surged.",
             "As many had feared they would, prices rose.",
             "Prices rose on the news.",
             "It was a week when prices rose sharply."],
        ],
        "filler": "{name} spoke with neighbors at the library branch who asked about bus routes and trash pickup.",
        "questions": ["Why did the council approve the budget?",
                      "What happened to local prices?",
                      "Which programs received new funding?",
                      "Who opposed the plan and why?"],
    },
]

REFERENCE = [
    ("cup-final", "Underdogs win the cup final", [
        "The underdogs won the cup final with a late goal.",
        "Fans filled the square to celebrate the victory.",
        "The coach praised the defense after the match."]),
    ("museum-reopens", "Museum reopens after renovation", [
        "The museum reopened its doors after two years of work.",
        "Visitors lined up early to see the new galleries.",
        "Curators added a wing for modern sculpture."]),
    ("marathon-record", "Runner sets marathon record", [
        "A runner set a course record at the marathon.",
        "Spectators cheered along the river route.",
        "Organizers thanked volunteers for their help."]),
]


def article(domain, paragraphs, summary, headline):
    return {"source_domain": domain, "url": "https://%s/news/story" % domain, "headline": headline,
            "summary": summary, "paragraphs": paragraphs, "is_partial": False}


def build_story(entry):
    articles = []
    for i, domain in enumerate(DOMAINS):
        name = domain.split(".")[0].capitalize()
        paragraphs = [entry["facts"][0][i % 4], entry["facts"][1][(i // 3 + i) % 4]]
        # Vary length so the median article and summary selection are non-trivial.
        for k in range(i % 3 + 1):
            paragraphs.append(entry["filler"].format(name=name) if k == 0 else
                              "%s editors added note %d for readers following the story." % (name, k))
        summary = None
        if i % 4 != 3:
            summary = " ".join(["%s summary word" % name] * (8 + 4 * (i % 5)))
        articles.append(article(domain, paragraphs, summary, "%s: %s" % (name, entry["title"])))
    articles.insert(5, {"source_domain": "paywalledtimes.com", "url": "https://paywalledtimes.com/news/story",
                        "headline": "Paywalled: " + entry["title"], "summary": None, "paragraphs": [],
                        "is_partial": True})
    return {"story_id": entry["story_id"], "title": entry["title"], "retrieved_at": entry["retrieved_at"],
            "articles": articles}


def write(path, doc):
    with open(path, "w") as f:
        json.dump(doc, f, indent=2, ensure_ascii=False)
        f.write("\n")


if __name__ == "__main__":
    for entry in STORIES:
        write(os.path.join(HERE, "corpus", entry["story_id"] + ".json"), build_story(entry))
        write(os.path.join(HERE, "questions", entry["story_id"] + ".json"),
              {"story_id": entry["story_id"], "questions": entry["questions"]})
    for story_id, title, paragraphs in REFERENCE:
        articles = [article(d, [p.replace("The ", "The %s " % d.split(".")[0]) if j == 0 else p
                                for j, p in enumerate(paragraphs)], None, title) for d in DOMAINS[:4]]
        write(os.path.join(HERE, "reference", story_id + ".json"),
              {"story_id": story_id, "title": title, "retrieved_at": "2022-05-01T12:00:00Z", "articles": articles})
