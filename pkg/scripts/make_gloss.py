#!/usr/bin/env python3
"""Regenerate the bundled gloss lexicon (src/agriqa/data/gloss.tsv).

Questions reach the ranking stage already stemmed, so every entry is written
twice when its stem differs from the surface form: once under the dictionary
word, once under the Porter stem. Run from the repo root after editing the
GLOSSES table below.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from agriqa import porter  # noqa: E402

GLOSSES = [
    # cereals
    ("wheat", "cereal grain crop"),
    ("paddy", "cereal grain rice"),
    ("rice", "cereal grain food staple"),
    ("maize", "cereal grain corn crop"),
    ("barley", "cereal grain crop malt"),
    ("millet", "cereal grain small seed crop"),
    ("sorghum", "cereal grain fodder crop"),
    ("jowar", "cereal grain sorghum fodder"),
    ("bajra", "cereal grain pearl millet"),
    # pulses and oilseeds
    ("gram", "pulse legume protein crop"),
    ("lentil", "pulse legume protein seed"),
    ("soybean", "oilseed legume protein crop"),
    ("mustard", "oilseed crop yellow flower"),
    ("groundnut", "oilseed legume peanut crop"),
    ("sesame", "oilseed crop small seed"),
    ("sunflower", "oilseed crop yellow flower"),
    ("safflower", "oilseed crop orange flower"),
    ("castor", "oilseed crop industrial nonedible"),
    ("moong", "pulse legume green gram"),
    ("urad", "pulse legume black gram"),
    ("arhar", "pulse legume pigeon pea"),
    ("tur", "pulse legume pigeon pea"),
    # fibre, sugar, tubers
    ("cotton", "fibre crop boll lint"),
    ("sugarcane", "sugar cane tall grass crop"),
    ("potato", "tuber vegetable starch crop"),
    ("onion", "bulb vegetable crop"),
    ("garlic", "bulb vegetable pungent crop"),
    ("ginger", "spice rhizome pungent crop"),
    ("carrot", "vegetable root orange crop"),
    ("jute", "fibre crop sack bag"),
    # fruits and vegetables
    ("tomato", "vegetable fruit red crop"),
    ("brinjal", "vegetable eggplant purple crop"),
    ("chilli", "vegetable spice hot fruit"),
    ("okra", "vegetable green pod crop"),
    ("cabbage", "vegetable leafy head crop"),
    ("cauliflower", "vegetable white head crop"),
    ("banana", "fruit tree yellow bunch"),
    ("mango", "fruit tree orchard summer"),
    ("lemon", "fruit citrus sour tree"),
    ("coconut", "fruit palm tree oil"),
    ("cashew", "nut tree orchard crop"),
    ("grape", "fruit vine bunch orchard"),
    ("orange", "fruit citrus tree orchard"),
    ("pomegranate", "fruit tree red seed orchard"),
    ("guava", "fruit tree orchard green"),
    ("papaya", "fruit tree orange soft"),
    ("cumin", "spice seed crop aromatic"),
    ("turmeric", "spice rhizome yellow crop"),
    ("coriander", "spice herb leaf seed"),
    # market and money
    ("market", "place trade buying selling goods"),
    ("rate", "price value money amount"),
    ("price", "money value cost amount"),
    ("sell", "trade exchange goods money"),
    ("mandi", "market yard trade produce"),
    # pests
    ("pest", "insect organism damage plant attack"),
    ("insect", "pest small organism six legs"),
    ("caterpillar", "insect pest larva moth damage"),
    ("aphid", "insect pest sap sucking small"),
    ("borer", "insect pest larva stem fruit damage"),
    ("weevil", "insect pest beetle grain damage"),
    ("thrips", "insect pest tiny sap damage"),
    ("whitefly", "insect pest white sap sucking"),
    ("hopper", "insect pest sap jumping damage"),
    ("mite", "pest tiny arachnid sap damage"),
    ("larva", "insect young stage caterpillar grub"),
    # disease
    ("disease", "infection sickness plant damage pathogen"),
    ("blast", "disease fungus plant leaf neck"),
    ("blight", "disease fungus plant sudden damage"),
    ("rust", "disease fungus plant orange spots"),
    ("wilt", "disease plant drooping water loss"),
    ("mildew", "disease fungus plant white powder"),
    ("smut", "disease fungus grain black powder"),
    ("rot", "disease decay plant tissue damage"),
    ("virus", "disease pathogen plant mosaic stunt"),
    ("fungus", "organism disease spore plant mold"),
    ("deficiency", "lack nutrient shortage plant pale"),
    # inputs and practice
    ("fertilizer", "plant nutrient soil input growth"),
    ("urea", "fertilizer nitrogen white granule"),
    ("compost", "fertilizer organic decayed matter soil"),
    ("manure", "fertilizer organic animal dung soil"),
    ("nitrogen", "nutrient element plant growth leaf"),
    ("phosphorus", "nutrient element plant root flower"),
    ("potash", "nutrient element plant fruit stem"),
    ("zinc", "nutrient element micronutrient plant"),
    ("pesticide", "chemical spray pest control plant"),
    ("fungicide", "chemical spray fungus disease control"),
    ("herbicide", "chemical spray weed control field"),
    ("spray", "apply liquid chemical plant mist"),
    ("control", "manage stop reduce pest disease"),
    ("dose", "quantity amount chemical application"),
    ("seed", "plant grain sowing germination material"),
    ("variety", "kind type cultivar seed plant"),
    ("sowing", "planting seed field operation time"),
    ("harvest", "cutting gathering crop mature yield"),
    ("yield", "output produce quantity crop harvest"),
    ("irrigation", "water supply field channel crop"),
    ("water", "liquid irrigation rain moisture"),
    ("soil", "earth ground land field nutrient"),
    ("field", "land plot cultivation area soil"),
    ("crop", "plant cultivated field produce harvest"),
    ("plant", "living organism crop leaf root"),
    ("leaf", "plant green part photosynthesis"),
    ("root", "plant underground part absorb water"),
    ("stem", "plant stalk support part"),
    ("fruit", "plant ripened part seed edible"),
    ("flower", "plant bloom part reproduction"),
    ("farmer", "person cultivator agriculture grower"),
    ("scheme", "government program subsidy benefit plan"),
    ("subsidy", "government money support scheme benefit"),
    ("loan", "money credit bank borrow repay"),
    ("insurance", "protection money crop loss cover"),
    ("season", "time period cropping year weather"),
    ("information", "detail knowledge fact guidance"),
]


def main() -> None:
    out = Path(__file__).resolve().parents[1] / "src/agriqa/data/gloss.tsv"
    lines = ["# bundled gloss lexicon: word<TAB>gloss, one sense bag per word",
             "# regenerate with scripts/make_gloss.py"]
    seen = set()
    for word, gloss in GLOSSES:
        if word in seen:
            raise SystemExit(f"duplicate gloss key {word!r}")
        seen.add(word)
        lines.append(f"{word}\t{gloss}")
        stemmed = porter.stem(word)
        if stemmed != word and stemmed not in seen:
            seen.add(stemmed)
            lines.append(f"{stemmed}\t{gloss}")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(seen)} keys)")


if __name__ == "__main__":
    main()
