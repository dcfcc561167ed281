#!/usr/bin/env python3
"""Regenerates the bundled language-ID seed data and the derived stopword list.

Writes data/seed/{is,en,da}.txt (one sentence per line) and data/stopwords/is.txt
(tokens of the Icelandic seed ranked by frequency). Deterministic: a fixed RNG
seed reproduces the committed files byte for byte.
"""

import argparse
import collections
import random
import re
from pathlib import Path

SENTENCES_PER_LANGUAGE = 260
RNG_SEED = 20200515

IS_TEMPLATES = [
    "{subj} {verb} {obj} {adv}.",
    "Í {place} {verb} {subj} {obj}.",
    "{subj} {verb} að {inf} {obj} {adv}.",
    "Þegar {subj} {verb} {obj}, {verb2} {subj2} {obj2}.",
    "{subj} og {subj2} {verbpl} {obj} við {place}.",
    "Um {time} {verb} {subj} {obj} í {place}.",
    "Það er {adj} að {inf} {obj} á {place}.",
    "{subj} {verb} ekki {obj} því að {subj2} {verb2} {obj2}.",
    "Á {time} {verbpl} {subj} og {subj2} {obj} saman.",
    "{subj} sagði að {subj2} {verb2} {obj2} {adv}.",
    "Eftir {time} {verb} {subj} aftur til {place}.",
    "{subj} {verb} {obj} en {subj2} {verb2} {obj2}.",
]

IS_POOLS = {
    "subj": ["bóndinn", "kennarinn", "stelpan", "strákurinn", "skipstjórinn",
             "læknirinn", "amma", "afi", "þingmaðurinn", "söngkonan",
             "hundurinn", "kötturinn", "ferðamaðurinn", "rithöfundurinn"],
    "subj2": ["nágranninn", "systirin", "bróðirinn", "vinurinn", "forsetinn",
              "smiðurinn", "presturinn", "bakarinn"],
    "verb": ["sá", "keypti", "las", "skrifaði", "borðaði", "málaði", "smíðaði",
             "söng um", "fann", "skoðaði", "þvoði", "seldi"],
    "verb2": ["gleymdi", "mundi eftir", "lagaði", "braut", "faldi", "sótti",
              "teiknaði", "opnaði"],
    "verbpl": ["sáu", "keyptu", "lásu", "skrifuðu", "borðuðu", "máluðu",
               "fundu", "seldu"],
    "inf": ["lesa", "skrifa", "mála", "smíða", "veiða", "baka", "syngja um",
            "skoða"],
    "obj": ["bókina", "fiskinn", "húsið", "bátinn", "brauðið", "myndina",
            "peysuna", "bílinn", "kaffið", "blaðið", "lagið", "kökuna"],
    "obj2": ["lykilinn", "gluggann", "stólinn", "pottinn", "vettlingana",
             "úlpuna", "símann", "miðann"],
    "adv": ["í gær", "í morgun", "seint um kvöldið", "snemma", "hægt og rólega",
            "með ánægju", "fyrir hádegi", "eftir vinnu"],
    "place": ["fjörunni", "dalnum", "bænum", "eldhúsinu", "skólanum",
              "höfninni", "fjallinu", "sveitinni", "borginni", "kirkjunni"],
    "time": ["helgina", "veturinn", "sumarið", "páskana", "jólin", "vorið",
             "haustið", "mánaðamótin"],
    "adj": ["gaman", "erfitt", "auðvelt", "mikilvægt", "skrýtið", "gott",
            "leiðinlegt", "hollt"],
}

EN_TEMPLATES = [
    "{subj} {verb} {obj} {adv}.",
    "In {place}, {subj} {verb} {obj}.",
    "{subj} decided to {inf} {obj} {adv}.",
    "When {subj} {verb} {obj}, {subj2} {verb2} {obj2}.",
    "{subj} and {subj2} {verbpl} {obj} near {place}.",
    "During {time}, {subj} {verb} {obj} in {place}.",
    "It is {adj} to {inf} {obj} at {place}.",
    "{subj} did not {inf} {obj} because {subj2} {verb2} {obj2}.",
    "Over {time}, {subj} and {subj2} {verbpl} {obj} together.",
    "{subj} said that {subj2} {verb2} {obj2} {adv}.",
    "After {time}, {subj} returned to {place} again.",
    "{subj} {verb} {obj}, but {subj2} {verb2} {obj2}.",
]

EN_POOLS = {
    "subj": ["the farmer", "the teacher", "the girl", "the boy", "the captain",
             "the doctor", "grandmother", "grandfather", "the writer",
             "the singer", "the dog", "the traveller"],
    "subj2": ["the neighbour", "the sister", "the brother", "the friend",
              "the mayor", "the carpenter", "the baker", "the clerk"],
    "verb": ["saw", "bought", "read", "wrote about", "ate", "painted",
             "built", "found", "inspected", "washed", "sold", "carried"],
    "verb2": ["forgot", "remembered", "repaired", "broke", "hid", "fetched",
              "drew", "opened"],
    "verbpl": ["saw", "bought", "read", "wrote about", "ate", "painted",
               "found", "sold"],
    "inf": ["read", "write about", "paint", "build", "catch", "bake",
            "sing about", "examine"],
    "obj": ["the book", "the fish", "the house", "the boat", "the bread",
            "the picture", "the sweater", "the car", "the coffee",
            "the newspaper", "the song", "the cake"],
    "obj2": ["the key", "the window", "the chair", "the pot", "the mittens",
             "the jacket", "the phone", "the ticket"],
    "adv": ["yesterday", "this morning", "late in the evening", "early",
            "slowly and carefully", "with pleasure", "before noon",
            "after work"],
    "place": ["the shore", "the valley", "the town", "the kitchen",
              "the school", "the harbour", "the mountain", "the countryside",
              "the city", "the church"],
    "time": ["the weekend", "the winter", "the summer", "the holidays",
             "christmas", "the spring", "the autumn", "the month"],
    "adj": ["fun", "difficult", "easy", "important", "strange", "good",
            "boring", "healthy"],
}

DA_TEMPLATES = [
    "{subj} {verb} {obj} {adv}.",
    "I {place} {verb} {subj} {obj}.",
    "{subj} besluttede at {inf} {obj} {adv}.",
    "Da {subj} {verb} {obj}, {verb2} {subj2} {obj2}.",
    "{subj} og {subj2} {verb} {obj} ved {place}.",
    "I løbet af {time} {verb} {subj} {obj} i {place}.",
    "Det er {adj} at {inf} {obj} på {place}.",
    "{subj} {verb} ikke {obj}, fordi {subj2} {verb2} {obj2}.",
    "Hen over {time} {verb} {subj} og {subj2} {obj} sammen.",
    "{subj} sagde, at {subj2} {verb2} {obj2} {adv}.",
    "Efter {time} vendte {subj} tilbage til {place} igen.",
    "{subj} {verb} {obj}, men {subj2} {verb2} {obj2}.",
]

DA_POOLS = {
    "subj": ["bonden", "læreren", "pigen", "drengen", "kaptajnen", "lægen",
             "bedstemor", "bedstefar", "forfatteren", "sangeren", "hunden",
             "den rejsende"],
    "subj2": ["naboen", "søsteren", "broderen", "vennen", "borgmesteren",
              "tømreren", "bageren", "købmanden"],
    "verb": ["så", "købte", "læste", "skrev om", "spiste", "malede",
             "byggede", "fandt", "undersøgte", "vaskede", "solgte", "bar"],
    "verb2": ["glemte", "huskede", "reparerede", "ødelagde", "gemte",
              "hentede", "tegnede", "åbnede"],
    "inf": ["læse", "skrive om", "male", "bygge", "fange", "bage",
            "synge om", "undersøge"],
    "obj": ["bogen", "fisken", "huset", "båden", "brødet", "billedet",
            "trøjen", "bilen", "kaffen", "avisen", "sangen", "kagen"],
    "obj2": ["nøglen", "vinduet", "stolen", "gryden", "vanterne", "jakken",
             "telefonen", "billetten"],
    "adv": ["i går", "i morges", "sent om aftenen", "tidligt",
            "langsomt og roligt", "med glæde", "før middag", "efter arbejde"],
    "place": ["stranden", "dalen", "byen", "køkkenet", "skolen", "havnen",
              "bjerget", "landet", "storbyen", "kirken"],
    "time": ["weekenden", "vinteren", "sommeren", "påsken", "julen",
             "foråret", "efteråret", "måneden"],
    "adj": ["sjovt", "svært", "nemt", "vigtigt", "mærkeligt", "godt",
            "kedeligt", "sundt"],
}


def generate(rng, templates, pools, count):
    seen = set()
    out = []
    while len(out) < count:
        template = rng.choice(templates)
        fields = {name: rng.choice(pool) for name, pool in pools.items()}
        sentence = template.format(**fields)
        sentence = sentence[0].upper() + sentence[1:]
        if sentence in seen:
            continue
        seen.add(sentence)
        out.append(sentence)
    return out


def stopwords_from(sentences, top):
    counts = collections.Counter()
    for sentence in sentences:
        for token in re.findall(r"[^\W\d_]+", sentence.lower(), re.UNICODE):
            counts[token] += 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [token for token, _ in ranked[:top]]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--root", default=str(Path(__file__).resolve().parent.parent),
                        help="repository root (default: parent of scripts/)")
    parser.add_argument("--top-stopwords", type=int, default=200)
    args = parser.parse_args()

    root = Path(args.root)
    seed_dir = root / "data" / "seed"
    stop_dir = root / "data" / "stopwords"
    seed_dir.mkdir(parents=True, exist_ok=True)
    stop_dir.mkdir(parents=True, exist_ok=True)

    rng = random.Random(RNG_SEED)
    languages = [
        ("is", IS_TEMPLATES, IS_POOLS),
        ("en", EN_TEMPLATES, EN_POOLS),
        ("da", DA_TEMPLATES, DA_POOLS),
    ]
    icelandic = None
    for code, templates, pools in languages:
        sentences = generate(rng, templates, pools, SENTENCES_PER_LANGUAGE)
        (seed_dir / f"{code}.txt").write_text("\n".join(sentences) + "\n",
                                              encoding="utf-8")
        if code == "is":
            icelandic = sentences

    stopwords = stopwords_from(icelandic, args.top_stopwords)
    (stop_dir / "is.txt").write_text("\n".join(stopwords) + "\n", encoding="utf-8")

    print(f"wrote {SENTENCES_PER_LANGUAGE} sentences per language under {seed_dir}")
    print(f"wrote {len(stopwords)} stopwords to {stop_dir / 'is.txt'}")


if __name__ == "__main__":
    main()
