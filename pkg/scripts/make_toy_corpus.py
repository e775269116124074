#!/usr/bin/env python3
"""Regenerate the bundled toy corpus (src/agriqa/data/toy/kcc_toy.csv).

The corpus is synthetic but shaped like a real helpline export: template
question families over the bundled crop list, repeated surface variants
that must merge during grouping, weather rows (by label and by token),
and a few non-English rows for the language filter.

Every canonical entry must end up with a distinct normalized token set,
otherwise two entries would embed identically and verbatim self-retrieval
could tie. The script asserts this before writing anything.
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from agriqa import corpus as corpus_mod  # noqa: E402
from agriqa.corpus import QaRecord, serialize_csv  # noqa: E402
from agriqa.textprep import (NormalizerConfig, build_spell_dictionary,  # noqa: E402
                             crop_word_set, load_crop_names, load_stopwords,
                             load_synonyms, normalize_words)

DATA = ROOT / "src/agriqa/data"
OUT = DATA / "toy/kcc_toy.csv"

FIG5_QUESTION = "Wheat market rate"
FIG5_ANSWER = "wheat market rate – 1800 – – 2200 rups pq"

STATES = ["maharashtra", "punjab", "haryana", "gujarat", "rajasthan",
          "karnataka", "tamil nadu", "uttar pradesh", "madhya pradesh",
          "telangana"]
DISTRICTS = ["pune", "ludhiana", "karnal", "rajkot", "jaipur", "belgaum",
             "salem", "kanpur", "indore", "warangal"]
SEASONS = ["kharif", "rabi", "zaid", "jayad", "Rabi", "KHARIF", "", "jayed"]
DATES = ["2023-01-%02d 09:%02d:00" % (d, m) for d, m in
         zip(range(1, 29), range(10, 38))]

RATE_CROPS = ["paddy", "cotton", "maize", "mustard", "soybean", "onion",
              "potato", "tomato", "brinjal", "chilli", "mango", "banana",
              "grape", "barley", "sesame", "cumin", "coriander", "turmeric",
              "ginger", "garlic", "okra", "cabbage", "cauliflower", "carrot",
              "lemon", "guava", "papaya", "pomegranate", "sunflower",
              "groundnut", "sugarcane", "lentil"]
FERT_CROPS = ["wheat", "paddy", "cotton", "maize", "mustard", "soybean",
              "onion", "potato", "tomato", "brinjal", "chilli", "mango",
              "banana", "grape", "turmeric", "garlic", "okra", "cabbage",
              "carrot", "guava", "papaya", "sunflower", "sugarcane", "lentil",
              "cumin", "ginger", "jowar", "bajra"]
PEST_PAIRS = [
    ("caterpillar", "cotton"), ("caterpillar", "gram"), ("caterpillar", "cabbage"),
    ("caterpillar", "maize"), ("aphid", "mustard"), ("aphid", "wheat"),
    ("aphid", "okra"), ("aphid", "potato"), ("borer", "brinjal"),
    ("borer", "sugarcane"), ("borer", "paddy"), ("borer", "mango"),
    ("whitefly", "cotton"), ("whitefly", "tomato"), ("whitefly", "chilli"),
    ("whitefly", "brinjal"), ("thrips", "onion"), ("thrips", "chilli"),
    ("thrips", "grape"), ("thrips", "cumin"), ("mite", "chilli"),
    ("mite", "okra"), ("mite", "coconut"), ("mite", "papaya"),
    ("hopper", "mango"), ("hopper", "paddy"), ("hopper", "potato"),
    ("weevil", "banana"), ("weevil", "maize"), ("weevil", "coconut"),
    ("termite", "wheat"), ("termite", "sugarcane"), ("termite", "groundnut"),
    ("locust", "bajra"), ("locust", "mustard"), ("locust", "cotton"),
    ("aphid", "coriander"), ("borer", "okra"), ("caterpillar", "soybean"),
    ("mite", "jute"),
]
DISEASE_PAIRS = [
    ("blast", "paddy"), ("blight", "potato"), ("blight", "tomato"),
    ("rust", "wheat"), ("rust", "barley"), ("rust", "lentil"),
    ("wilt", "chilli"), ("wilt", "gram"), ("wilt", "cotton"),
    ("wilt", "guava"), ("mildew", "grape"), ("mildew", "cumin"),
    ("mildew", "okra"), ("mildew", "mango"), ("smut", "sugarcane"),
    ("smut", "barley"), ("rot", "onion"), ("rot", "garlic"),
    ("rot", "ginger"), ("rot", "papaya"), ("virus", "tomato"),
    ("virus", "chilli"), ("virus", "papaya"), ("virus", "okra"),
    ("blight", "cumin"), ("blast", "millet"), ("rust", "soybean"),
    ("wilt", "brinjal"), ("rot", "turmeric"), ("blight", "carrot"),
    ("mildew", "coriander"), ("smut", "jowar"), ("virus", "moong"),
    ("wilt", "castor"), ("rust", "urad"), ("blast", "jowar"),
]
VARIETY_CROPS = ["wheat", "paddy", "cotton", "maize", "mustard", "soybean",
                 "onion", "potato", "tomato", "chilli", "mango", "banana",
                 "grape", "barley", "cumin", "turmeric", "garlic", "okra",
                 "guava", "pomegranate", "sunflower", "groundnut", "sugarcane",
                 "lentil", "bajra", "moong", "carrot", "sesame"]
IRRIGATION_CROPS = ["wheat", "cotton", "maize", "onion", "potato", "tomato",
                    "banana", "grape", "turmeric", "garlic", "sugarcane",
                    "mango", "pomegranate", "papaya", "chilli", "cumin",
                    "carrot", "brinjal", "cauliflower", "ginger", "lemon",
                    "cashew"]
SEEDTREAT_CROPS = ["wheat", "paddy", "cotton", "maize", "soybean", "gram",
                   "onion", "potato", "okra", "sunflower", "groundnut",
                   "lentil", "moong", "urad", "bajra", "jowar", "sesame",
                   "castor", "mustard", "cumin", "barley", "carrot"]
SOWING_CROPS = ["wheat", "paddy", "cotton", "maize", "mustard", "soybean",
                "onion", "potato", "tomato", "chilli", "barley", "cumin",
                "coriander", "garlic", "okra", "cabbage", "cauliflower",
                "carrot", "sunflower", "groundnut", "lentil", "moong",
                "urad", "sesame"]
YIELD_CROPS = ["wheat", "paddy", "cotton", "maize", "soybean", "onion",
               "potato", "tomato", "banana", "grape", "turmeric", "garlic",
               "sugarcane", "groundnut", "mustard", "barley", "cumin",
               "pomegranate", "guava", "chilli"]

SCHEME_QUESTIONS = [
    ("tractor subsidy details", "apply on mahadbt portal with 7 12 extract and quotation subsidy upto 1.25 lakh"),
    ("crop insurance enrollment last date", "enroll before 31 july at csc center with bank passbook and sowing declaration"),
    ("drip irrigation subsidy amount", "55 percent subsidy for small farmers under micro irrigation fund apply online"),
    ("kisan credit card limit", "limit fixed by scale of finance per acre contact nearest bank branch with land record"),
    ("soil health card application", "register at soil testing lab samples collected free card issued in 3 weeks"),
    ("pm kisan installment status", "check beneficiary status on pmkisan portal with aadhaar number"),
    ("solar pump scheme eligibility", "farmers with perennial water source eligible 90 percent subsidy under kusum"),
    ("greenhouse construction subsidy", "50 percent subsidy under national horticulture mission project report needed"),
    ("certified seed subsidy rate", "subsidy 50 percent of seed cost for notified varieties through taluka agriculture office"),
    ("farm pond scheme assistance", "earthwork assistance per cubic meter under employment guarantee apply at gram panchayat"),
    ("dairy loan interest rate", "nabard refinance scheme interest 7 percent subvention for timely repayment"),
    ("poultry farming loan procedure", "project report to district industries center margin money 25 percent"),
    ("organic farming certification cost", "group certification 15000 per hectare for 3 year conversion period"),
    ("horticulture mission plant material", "subsidized saplings from accredited nurseries 40 percent cost share"),
    ("agriculture mechanization scheme", "custom hiring center grant 40 lakh for farmer producer company"),
    ("goat rearing scheme benefit", "10 plus 1 unit cost 1 lakh subsidy 50 percent for women beneficiaries"),
]
MISC_QUESTIONS = [
    ("soil testing procedure", "collect samples zigzag from 15 cm depth mix quarter and send 500 gram to lab"),
    ("mandi license requirement", "apply to market committee with shop document and bank solvency certificate"),
    ("cold storage space booking", "contact district cold storage association booking per quintal per month basis"),
    ("rain water harvesting structure", "farm pond with plastic lining 30 by 30 by 3 meter stores 27 lakh liter"),
    ("vermicompost preparation method", "layer dung and crop residue in shade bed release eisenia worms harvest in 60 days"),
    ("mushroom cultivation training", "krishi vigyan kendra conducts 5 day oyster mushroom course register by phone"),
    ("bee keeping box cost", "standard 10 frame box 4000 rups colony separate contact khadi board"),
    ("drip system maintenance tips", "flush laterals monthly acid treatment quarterly check emitter discharge"),
    ("sprinkler spacing distance", "12 by 12 meter spacing for field crops operate at 2.5 kg pressure"),
    ("green manure benefit", "dhaincha adds 60 kg nitrogen per hectare bury at flowering before transplant"),
    ("azolla production unit", "10 by 2 meter pit with plastic sheet 200 gram culture doubles in 7 days"),
    ("neem oil preparation", "mix 50 ml neem oil 10 gram soap in 10 liter water spray in evening"),
    ("bio fertilizer application method", "mix rhizobium culture with jaggery solution coat seeds dry in shade"),
    ("fodder crop for summer", "grow multi cut sorghum sudan hybrid or lucerne with assured irrigation"),
    ("silage making process", "chop green maize at dough stage pack airtight in pit open after 45 days"),
    ("milk production increase tips", "feed 300 gram mineral mixture daily with green fodder and clean water"),
    ("tractor price negotiation", "compare on road price across dealers october discounts best check resale value"),
    ("weed management in direct seeded paddy", "apply pendimethalin within 3 days then bispyribac at 20 days"),
]

WEATHER_QUESTIONS = [
    ("what is the weather", "other"),
    ("what is the weather today", "weather"),
    ("weather forecast for next week", "weather"),
    ("will it rain tomorrow", "weather"),
    ("rainfall prediction this month", "weather"),
    ("weather condition for spraying", "other"),
    ("is there hailstorm warning", "weather"),
    ("temperature forecast for wheat sowing", "weather"),
    ("wind speed today for spraying", "weather"),
    ("humidity level tomorrow", "weather"),
    ("weather report", "1"),
    ("fog expected next week or not", "weather"),
]
WEATHER_ANSWER = "connected to weather service"

NON_ENGLISH = [
    ("गेहूं का भाव क्या चल रहा है", "market information"),
    ("कापसाची फवारणी कधी करावी", "plant protection"),
    ("आलू में झुलसा रोग की दवा", "plant protection"),
]

PEST_REMEDIES = {
    "caterpillar": "spray quinolphos 30ml/15 l water",
    "aphid": "spray imidacloprid 5 ml per 15 liter water on underside of leaves",
    "borer": "install pheromone traps 5 per acre and spray chlorantraniliprole 3 ml per 10 liter",
    "whitefly": "yellow sticky traps 10 per acre spray diafenthiuron 20 gram per 15 liter",
    "thrips": "spray fipronil 20 ml per 15 liter alternate with spinosad",
    "mite": "spray wettable sulphur 30 gram per 15 liter avoid repeat synthetic acaricide",
    "hopper": "drain field and dust with methyl parathion 2 percent at 10 kg per acre",
    "weevil": "soil drench chlorpyrifos 2.5 ml per liter near collar region",
    "termite": "flood irrigation followed by chlorpyrifos 2 liter per acre with sand",
    "locust": "community spray malathion 96 ulv coordinate with agriculture office",
}
DISEASE_REMEDIES = {
    "blast": "spray tricyclazole 6 gram per 10 liter at boot leaf stage",
    "blight": "spray mancozeb 25 gram per 10 liter repeat after 10 days",
    "rust": "spray propiconazole 10 ml per 10 liter at first pustule",
    "wilt": "drench carbendazim 10 gram per 10 liter near root zone uproot dead plants",
    "mildew": "spray hexaconazole 10 ml per 15 liter ensure canopy coverage",
    "smut": "seed treatment with carboxin 2 gram per kg remove smutted ears in gunny bag",
    "rot": "improve drainage drench copper oxychloride 25 gram per 10 liter",
    "virus": "remove infected plants control vector whitefly use resistant variety",
}


def build_rows() -> list[QaRecord]:
    rows: list[tuple[str, str, str]] = []  # (question, answer, query_type)

    rows.append((FIG5_QUESTION, FIG5_ANSWER, "market information"))
    for crop in RATE_CROPS:
        answer = (f"{crop} modal rate {900 + 37 * (len(crop) * 7 % 50)} to "
                  f"{1400 + 41 * (len(crop) * 11 % 60)} rups per quintal")
        rows.append((f"market rate of {crop}", answer, "market information"))
    for crop in FERT_CROPS:
        n = 40 + (len(crop) * 13) % 60
        p = 20 + (len(crop) * 7) % 30
        k = 20 + (len(crop) * 5) % 25
        rows.append((f"fertilizer dose for {crop}",
                     f"apply {n} kg nitrogen {p} kg phosphorus {k} kg potash per acre in split doses",
                     "nutrient management"))
    for pest, crop in PEST_PAIRS:
        rows.append((f"how to control {pest} in {crop}",
                     PEST_REMEDIES[pest], "plant protection"))
    for disease, crop in DISEASE_PAIRS:
        rows.append((f"{disease} disease in {crop} treatment",
                     DISEASE_REMEDIES[disease], "plant protection"))
    for i, crop in enumerate(VARIETY_CROPS):
        rows.append((f"best variety of {crop} for sowing",
                     f"recommended varieties are {crop} selection {101 + i} and local released hybrid",
                     "varieties"))
    for crop in IRRIGATION_CROPS:
        days = 6 + (len(crop) * 3) % 8
        rows.append((f"irrigation schedule for {crop}",
                     f"irrigate at {days} day interval critical stages flowering and fruit set",
                     "cultural practices"))
    for crop in SEEDTREAT_CROPS:
        rows.append((f"seed treatment for {crop}",
                     "treat seed with thiram 3 gram per kg then rhizobium or azotobacter culture",
                     "cultural practices"))
    for crop in SOWING_CROPS:
        rows.append((f"sowing time of {crop}",
                     f"optimum sowing window for {crop} is second fortnight of recommended month for your zone",
                     "cultural practices"))
    for crop in YIELD_CROPS:
        q = 8 + (len(crop) * 9) % 30
        rows.append((f"yield of {crop} per acre",
                     f"average yield {q} quintal per acre with recommended package of practices",
                     "1"))
    for question, answer in SCHEME_QUESTIONS:
        rows.append((question, answer, "government schemes"))
    for question, answer in MISC_QUESTIONS:
        rows.append((question, answer, "cultural practices"))

    # surface variants and extra answers that must merge during grouping
    rows.append(("Market rate of PADDY?", "paddy coarse 1550 fine 1720 rups per quintal at apmc yard", "market information"))
    rows.append(("MARKET RATE OF ONION", "onion rate falling hold produce two weeks if storage available", "market information"))
    rows.append(("fertilizer dose for wheat.", "top dress 43 kg urea at crown root initiation stage", "nutrient management"))
    rows.append(("How to control aphid in mustard!", "release ladybird beetles 500 per acre if infestation below threshold", "plant protection"))
    rows.append(("Blast disease in paddy treatment", "use resistant variety and avoid excess nitrogen", "plant protection"))
    rows.append(("Sowing time of wheat", "complete sowing by 25 november to avoid terminal heat", "cultural practices"))
    rows.append(("soil testing PROCEDURE", "soil health card scheme gives free testing once in 2 years", "cultural practices"))
    rows.append(("irrigation schedule for BANANA?", "drip 16 liter per plant per day in summer 8 in winter", "cultural practices"))
    rows.append(("Wheat Market Rate", "msp procurement open at 2125 rups per quintal register on portal", "market information"))
    rows.append(("yield of POTATO per acre", "early variety 70 quintal late variety 95 quintal per acre", "1"))

    records = []
    for i, (question, answer, query_type) in enumerate(rows):
        records.append(QaRecord(
            query_id=f"Q{i + 1:05d}",
            question=question,
            query_type=query_type,
            created_on=DATES[i % len(DATES)],
            state=STATES[i % len(STATES)],
            district=DISTRICTS[(i * 3 + 1) % len(DISTRICTS)],
            season=SEASONS[i % len(SEASONS)],
            answer=answer,
        ))
    base = len(records)
    for j, (question, query_type) in enumerate(WEATHER_QUESTIONS):
        records.append(QaRecord(
            query_id=f"Q{base + j + 1:05d}",
            question=question,
            query_type=query_type,
            created_on=DATES[(base + j) % len(DATES)],
            state=STATES[(base + j) % len(STATES)],
            district=DISTRICTS[(base + j) % len(DISTRICTS)],
            season=SEASONS[(base + j) % len(SEASONS)],
            answer=WEATHER_ANSWER,
        ))
    base = len(records)
    for j, (question, query_type) in enumerate(NON_ENGLISH):
        records.append(QaRecord(
            query_id=f"Q{base + j + 1:05d}",
            question=question,
            query_type=query_type,
            created_on=DATES[j % len(DATES)],
            state=STATES[j % len(STATES)],
            district=DISTRICTS[j % len(DISTRICTS)],
            season=SEASONS[j % len(SEASONS)],
            answer="regional language desk will call back",
        ))
    return records


def validate(records: list[QaRecord]) -> None:
    crop_names = load_crop_names(DATA / "crops.txt")
    dictionary = build_spell_dictionary([r.question for r in records],
                                        crop_word_set(crop_names))
    config = NormalizerConfig(stopwords=load_stopwords(DATA / "stopwords.txt"),
                              dictionary=dictionary,
                              synonyms=load_synonyms(DATA / "synonyms.tsv"))
    english, dropped = corpus_mod.filter_english(records)
    assert dropped == len(NON_ENGLISH), f"dropped {dropped} non-english rows"
    weather, kept = corpus_mod.filter_weather(english, config)
    assert len(weather) == len(WEATHER_QUESTIONS), \
        f"weather filter caught {len(weather)} rows, expected {len(WEATHER_QUESTIONS)}"
    entries = corpus_mod.group_answers(kept, config)

    seen: dict[frozenset, str] = {}
    for entry in entries:
        words = normalize_words(entry.canonical_question, config)
        assert words, f"entry {entry.entry_id} normalizes to nothing: " \
                      f"{entry.canonical_question!r}"
        key = frozenset(words)
        if key in seen:
            raise SystemExit(f"normalized-set collision: {entry.canonical_question!r} "
                             f"vs {seen[key]!r}")
        seen[key] = entry.canonical_question
        assert entry.answers, f"entry {entry.entry_id} has no answers"

    fig5 = [e for e in entries if e.canonical_question == "wheat market rate"]
    assert len(fig5) == 1, f"expected exactly one wheat-rate entry, found {len(fig5)}"
    assert FIG5_ANSWER in fig5[0].answers, fig5[0].answers
    merged = [e for e in entries if len(e.raw_questions) > 1]
    print(f"rows={len(records)} canonical={len(entries)} "
          f"merged_entries={len(merged)} weather={len(weather)} "
          f"non_english={dropped}")
    if not 270 <= len(entries) <= 330:
        raise SystemExit(f"canonical entry count {len(entries)} outside target band")


def main() -> None:
    records = build_rows()
    ids = [r.query_id for r in records]
    assert len(ids) == len(set(ids))
    validate(records)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_bytes(serialize_csv(records))
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
