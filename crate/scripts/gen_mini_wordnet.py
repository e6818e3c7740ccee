#!/usr/bin/env python3
"""Write the small WordNet-format test database used by the lexicon tests.

The output follows the standard plain-text layout (index.*, data.*, *.exc)
with real byte offsets, so the same loader reads it and a full release.

    python3 scripts/gen_mini_wordnet.py crates/core/tests/data/mini-wordnet
"""
import os
import sys

POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
HEADER = [
    "  1 Miniature lexical database for tests.",
    "  2 Layout follows the WordNet 3.0 database files.",
]

# (key, pos, ss_type, words, gloss, pointers)
# pointers: (symbol, target key, source word or None, target word or None)
SYNSETS = []


def ss(key, pos, words, gloss, ptrs=(), ss_type=None):
    SYNSETS.append((key, pos, ss_type or pos, words, gloss, list(ptrs)))


def ant(a_key, a_word, b_key, b_word):
    for key, _, _, _, _, ptrs in SYNSETS:
        if key == a_key:
            ptrs.append(("!", b_key, a_word, b_word))
        if key == b_key:
            ptrs.append(("!", a_key, b_word, a_word))


def semantic(src, sym, dst, inverse):
    for key, _, _, _, _, ptrs in SYNSETS:
        if key == src:
            ptrs.append((sym, dst, None, None))
        if key == dst:
            ptrs.append((inverse, src, None, None))


def sim(head, sat):
    semantic(head, "&", sat, "&")


# adjectives: (head words, antonym head words)
ADJ_PAIRS = [
    (["good"], ["bad"]),
    (["happy"], ["unhappy", "sad"]),
    (["large", "big"], ["small", "little"]),
    (["hot"], ["cold"]),
    (["fast"], ["slow"]),
    (["strong"], ["weak"]),
    (["rich"], ["poor"]),
    (["easy"], ["difficult", "hard"]),
    (["high"], ["low"]),
    (["new"], ["old"]),
    (["young"], ["old"]),
    (["light"], ["dark"]),
    (["early"], ["late"]),
    (["wet"], ["dry"]),
    (["clean"], ["dirty"]),
    (["loud"], ["quiet"]),
    (["long"], ["short"]),
    (["true"], ["false"]),
    (["bright"], ["dim"]),
    (["whole"], ["partial"]),
    (["safe"], ["dangerous"]),
    (["beautiful"], ["ugly"]),
    (["heavy"], ["light"]),
    (["full"], ["empty"]),
    (["wide", "broad"], ["narrow"]),
]
for i, (left, right) in enumerate(ADJ_PAIRS):
    lk, rk = f"a{i}l", f"a{i}r"
    ss(lk, "a", left, f"having the quality of being {left[0]}")
    ss(rk, "a", right, f"having the quality of being {right[0]}")
    # the first word of each head carries the antonymy
    ant(lk, left[0], rk, right[0])

ss("a_great", "a", ["great", "outstanding"], "very good", ss_type="s")
sim("a0l", "a_great")
ss("a_glad", "a", ["glad"], "showing pleasure", ss_type="s")
ss("a_smart", "a", ["intelligent", "clever", "smart"], "having a good mind")
ss("a_stupid", "a", ["unintelligent", "stupid"], "lacking a good mind")
ant("a_smart", "intelligent", "a_stupid", "unintelligent")
ss("a_bright2", "a", ["bright", "brilliant"], "characterized by quickness of mind", ss_type="s")
sim("a_smart", "a_bright2")
ss("a_complete", "a", ["complete", "entire", "total"], "having every necessary part", ss_type="s")
sim("a19l", "a_complete")

# nouns
ss("n_man", "n", ["man", "adult_male"], "an adult person who is male")
ss("n_woman", "n", ["woman", "adult_female"], "an adult person who is female")
ant("n_man", "man", "n_woman", "woman")
ss("n_male", "n", ["male", "male_person"], "a person who belongs to the sex that cannot have babies")
ss("n_female", "n", ["female", "female_person"], "a person who belongs to the sex that can have babies")
semantic("n_man", "@", "n_male", "~")
semantic("n_woman", "@", "n_female", "~")
ss("n_day", "n", ["day", "daytime", "daylight"], "the time after sunrise and before sunset")
ss("n_night", "n", ["night", "nighttime", "dark"], "the time after sunset and before sunrise")
ant("n_day", "day", "n_night", "night")
ss("n_period", "n", ["time_period", "period"], "an amount of time")
semantic("n_day", "@", "n_period", "~")
semantic("n_night", "@", "n_period", "~")
ss("n_dog", "n", ["dog", "domestic_dog", "canis_familiaris"], "a member of the genus Canis")
ss("n_canine", "n", ["canine", "canid"], "any of various fissiped mammals")
ss("n_carnivore", "n", ["carnivore"], "a terrestrial or aquatic flesh-eating mammal")
ss("n_puppy", "n", ["puppy"], "a young dog")
ss("n_hound", "n", ["hound", "hound_dog"], "any of several breeds of dog used for hunting")
ss("n_pack", "n", ["pack"], "a group of hunting animals")
semantic("n_dog", "@", "n_canine", "~")
semantic("n_canine", "@", "n_carnivore", "~")
semantic("n_puppy", "@", "n_dog", "~")
semantic("n_hound", "@", "n_dog", "~")
semantic("n_dog", "#m", "n_pack", "%m")
ss("n_cat", "n", ["cat", "true_cat"], "feline mammal usually having thick soft fur")
ss("n_feline", "n", ["feline", "felid"], "any of various lithe-bodied roundheaded fissiped mammals")
ss("n_kitten", "n", ["kitten", "kitty"], "young domestic cat")
semantic("n_cat", "@", "n_feline", "~")
semantic("n_feline", "@", "n_carnivore", "~")
semantic("n_kitten", "@", "n_cat", "~")
ss("n_car", "n", ["car", "auto", "automobile", "machine", "motorcar"], "a motor vehicle with four wheels")
ss("n_vehicle", "n", ["motor_vehicle", "automotive_vehicle"], "a self-propelled wheeled vehicle")
ss("n_cardoor", "n", ["car_door"], "the door of a car")
ss("n_wheel", "n", ["wheel"], "a simple machine consisting of a circular frame")
ss("n_cab", "n", ["cab", "taxi", "taxicab"], "a car driven by a person whose job is to take passengers")
semantic("n_car", "@", "n_vehicle", "~")
semantic("n_car", "%p", "n_cardoor", "#p")
semantic("n_car", "%p", "n_wheel", "#p")
semantic("n_cab", "@", "n_car", "~")
ss("n_tree", "n", ["tree"], "a tall perennial woody plant")
ss("n_woody", "n", ["woody_plant", "ligneous_plant"], "a plant having hard lignified tissues")
ss("n_trunk", "n", ["trunk", "tree_trunk", "bole"], "the main stem of a tree")
ss("n_branch", "n", ["branch", "limb"], "a division of a stem")
ss("n_oak", "n", ["oak", "oak_tree"], "a deciduous tree of the genus Quercus")
semantic("n_tree", "@", "n_woody", "~")
semantic("n_tree", "%p", "n_trunk", "#p")
semantic("n_tree", "%p", "n_branch", "#p")
semantic("n_oak", "@", "n_tree", "~")
ss("n_house", "n", ["house"], "a dwelling that serves as living quarters")
ss("n_building", "n", ["building", "edifice"], "a structure that has a roof and walls")
ss("n_roof", "n", ["roof"], "a protective covering that covers a building")
ss("n_kitchen", "n", ["kitchen"], "a room equipped for preparing meals")
ss("n_cottage", "n", ["cottage", "bungalow"], "a small house")
semantic("n_house", "@", "n_building", "~")
semantic("n_house", "%p", "n_roof", "#p")
semantic("n_house", "%p", "n_kitchen", "#p")
semantic("n_cottage", "@", "n_house", "~")
ss("n_friend", "n", ["friend"], "a person you know well")
ss("n_enemy", "n", ["enemy", "foe"], "an opposing military force")
ant("n_friend", "friend", "n_enemy", "enemy")
ss("n_war", "n", ["war", "warfare"], "the waging of armed conflict")
ss("n_peace", "n", ["peace"], "the state prevailing during the absence of war")
ant("n_war", "war", "n_peace", "peace")
ss("n_conflict", "n", ["conflict", "struggle"], "an open clash")
semantic("n_war", "@", "n_conflict", "~")
ss("n_victory", "n", ["victory", "triumph"], "a successful ending of a struggle")
ss("n_defeat", "n", ["defeat", "loss"], "an unsuccessful ending of a struggle")
ant("n_victory", "victory", "n_defeat", "defeat")
ss("n_whole", "n", ["whole", "unit"], "an assemblage of parts regarded as a single entity")
ss("n_part", "n", ["part", "portion", "component"], "something determined in relation to something that includes it")
ss("n_entirety", "n", ["whole", "entirety", "totality"], "all of something including all its component elements")
semantic("n_whole", "%p", "n_part", "#p")
ss("n_city", "n", ["city", "metropolis", "urban_center"], "a large and densely populated urban area")
ss("n_municipality", "n", ["municipality"], "an urban district having corporate status")
ss("n_downtown", "n", ["downtown"], "the central area of a city")
semantic("n_city", "@", "n_municipality", "~")
semantic("n_city", "%p", "n_downtown", "#p")
ss("n_hand", "n", ["hand", "manus", "mitt", "paw"], "the extremity of the arm")
ss("n_finger", "n", ["finger"], "any of the terminal members of the hand")
ss("n_thumb", "n", ["thumb", "pollex"], "the thick short innermost digit")
ss("n_extremity", "n", ["extremity"], "that part of a limb that is farthest from the torso")
semantic("n_hand", "%p", "n_finger", "#p")
semantic("n_hand", "%p", "n_thumb", "#p")
semantic("n_hand", "@", "n_extremity", "~")
ss("n_book", "n", ["book", "volume"], "physical objects consisting of a number of pages bound together")
ss("n_publication", "n", ["publication"], "a copy of a printed work offered for distribution")
ss("n_chapter", "n", ["chapter"], "a subdivision of a written work")
ss("n_novel", "n", ["novel"], "an extended fictional work in prose")
semantic("n_book", "@", "n_publication", "~")
semantic("n_book", "%p", "n_chapter", "#p")
semantic("n_novel", "@", "n_book", "~")
ss("n_water", "n", ["water", "h2o"], "binary compound that occurs at room temperature as a clear liquid")
ss("n_liquid", "n", ["liquid"], "a substance that is liquid at room temperature")
ss("n_ice", "n", ["ice", "water_ice"], "water frozen in the solid state")
semantic("n_water", "@", "n_liquid", "~")
semantic("n_ice", "%s", "n_water", "#s")
ss("n_child", "n", ["child", "kid", "youngster"], "a young person of either sex")
ss("n_adult", "n", ["adult", "grownup"], "a fully developed person")
ant("n_child", "child", "n_adult", "adult")
ss("n_mouse", "n", ["mouse"], "any of numerous small rodents")
ss("n_table", "n", ["table"], "a piece of furniture having a smooth flat top")
ss("n_furniture", "n", ["furniture", "piece_of_furniture"], "furnishings that make a room ready for occupancy")
semantic("n_table", "@", "n_furniture", "~")
ss("n_entity", "n", ["entity"], "that which is perceived to have its own distinct existence")

# verbs
VERB_PAIRS = [
    ("v_buy", ["buy", "purchase"], "v_sell", ["sell"]),
    ("v_rise", ["rise", "go_up", "climb"], "v_fall", ["fall", "go_down", "descend"]),
    ("v_win", ["win"], "v_lose", ["lose"]),
    ("v_come", ["come", "come_up"], "v_go", ["go", "move", "travel"]),
    ("v_open", ["open", "open_up"], "v_close", ["close", "shut"]),
    ("v_increase", ["increase"], "v_decrease", ["decrease", "diminish", "lessen"]),
    ("v_love", ["love"], "v_hate", ["hate", "detest"]),
    ("v_start", ["start", "begin", "commence"], "v_finish", ["finish", "end", "terminate"]),
    ("v_push", ["push", "force"], "v_pull", ["pull", "draw"]),
    ("v_remember", ["remember", "recall", "recollect"], "v_forget", ["forget", "bury"]),
    ("v_accept", ["accept"], "v_reject", ["reject", "refuse"]),
    ("v_arrive", ["arrive", "get", "come_in"], "v_leave", ["leave", "go_forth", "depart"]),
]
for lk, lw, rk, rw in VERB_PAIRS:
    ss(lk, "v", lw, f"to {lw[0]}")
    ss(rk, "v", rw, f"to {rw[0]}")
    ant(lk, lw[0], rk, rw[0])
ss("v_run", "v", ["run"], "move fast by using one's feet")
ss("v_travel_fast", "v", ["travel_rapidly", "speed", "hurry", "zip"], "move fast")
ss("v_sprint", "v", ["sprint"], "run very fast, usually for a short distance")
ss("v_jog", "v", ["jog", "trot"], "run at a moderately swift pace")
semantic("v_run", "@", "v_travel_fast", "~")
semantic("v_sprint", "@", "v_run", "~")
semantic("v_jog", "@", "v_run", "~")
ss("v_operate", "v", ["run", "operate"], "direct or control a business")
ss("v_exercise", "v", ["exercise", "use", "employ", "apply"], "put to use")
ss("v_send", "v", ["send", "direct"], "cause to be directed or transmitted to another place")
ss("v_mail", "v", ["mail", "post"], "cause to be delivered by the postal service")
semantic("v_mail", "@", "v_send", "~")
ss("v_say", "v", ["state", "say", "tell"], "express in words")
ss("v_whisper", "v", ["whisper"], "speak softly")
semantic("v_whisper", "@", "v_say", "~")
ss("v_see", "v", ["see", "perceive"], "be able to see")
ss("v_give", "v", ["give"], "transfer possession of something")
ss("v_take", "v", ["take", "get_hold_of"], "get into one's hands")
ss("v_make", "v", ["make", "create"], "make or cause to be")
ss("v_eat", "v", ["eat"], "take in solid food")
ss("v_consume", "v", ["consume", "ingest", "take_in"], "serve oneself to, or consume regularly")
semantic("v_eat", "@", "v_consume", "~")

# adverbs
ADV_PAIRS = [
    ("r_quickly", ["quickly", "rapidly", "speedily"], "r_slowly", ["slowly", "tardily"]),
    ("r_well", ["well"], "r_badly", ["badly", "ill", "poorly"]),
    ("r_early", ["early"], "r_late", ["late", "belatedly"]),
    ("r_always", ["always", "ever"], "r_never", ["never"]),
    ("r_often", ["frequently", "often", "oftentimes"], "r_rarely", ["infrequently", "seldom", "rarely"]),
    ("r_carefully", ["carefully"], "r_carelessly", ["carelessly"]),
    ("r_loudly", ["loudly", "aloud"], "r_softly", ["softly", "quietly"]),
]
for lk, lw, rk, rw in ADV_PAIRS:
    ss(lk, "r", lw, f"in a {lw[0]} manner")
    ss(rk, "r", rw, f"in a {rw[0]} manner")
    ant(lk, lw[0], rk, rw[0])
ss("r_finally", "r", ["finally", "lastly", "in_conclusion"], "as the end result")

EXC = {
    "noun": [("children", "child"), ("men", "man"), ("mice", "mouse"), ("women", "woman"),
             ("feet", "foot"), ("teeth", "tooth")],
    "verb": [("ate", "eat"), ("began", "begin"), ("bought", "buy"), ("came", "come"),
             ("eaten", "eat"), ("fell", "fall"), ("forgot", "forget"), ("gave", "give"),
             ("got", "get"), ("lost", "lose"), ("made", "make"), ("ran", "run"),
             ("rose", "rise"), ("running", "run"), ("said", "say"), ("saw", "see"),
             ("seen", "see"), ("sent", "send"), ("sold", "sell"), ("stopped", "stop"),
             ("took", "take"), ("went", "go"), ("winning", "win"), ("won", "win")],
    "adj": [("best", "good"), ("better", "good"), ("bigger", "big"), ("biggest", "big"),
            ("happier", "happy"), ("happiest", "happy"), ("hotter", "hot"),
            ("hottest", "hot"), ("worse", "bad"), ("worst", "bad"), ("wetter", "wet")],
    "adv": [("best", "well"), ("better", "well"), ("worse", "badly")],
}


def main(out):
    os.makedirs(out, exist_ok=True)
    by_key = {s[0]: s for s in SYNSETS}
    offsets = {}
    lines = {}
    for pos in POS_FILES:
        group = [s for s in SYNSETS if s[1] == pos]
        cursor = sum(len(h) + 1 for h in HEADER)
        for s in group:
            offsets[s[0]] = cursor
            cursor += len(render(s, by_key, {k: 0 for k in by_key})) + 1
    for pos, name in POS_FILES.items():
        group = [s for s in SYNSETS if s[1] == pos]
        body = [render(s, by_key, offsets) for s in group]
        with open(os.path.join(out, f"data.{name}"), "w") as f:
            for line in HEADER + body:
                f.write(line + "\n")
        for s, line in zip(group, body):
            assert offsets[s[0]] == line_offset(os.path.join(out, f"data.{name}"), line)
        index = {}
        for key, _, _, words, _, ptrs in group:
            for w in words:
                entry = index.setdefault(w.lower(), ([], set()))
                entry[0].append(offsets[key])
                for sym, _, src, _ in ptrs:
                    if src is None or src == w:
                        entry[1].add(sym)
        with open(os.path.join(out, f"index.{name}"), "w") as f:
            for h in HEADER:
                f.write(h + "\n")
            for lemma in sorted(index):
                offs, syms = index[lemma]
                syms = sorted(syms)
                fields = [lemma, pos, str(len(offs)), str(len(syms)), *syms,
                          str(len(offs)), "0", *[f"{o:08d}" for o in offs]]
                f.write(" ".join(fields) + "  \n")
        with open(os.path.join(out, f"{name}.exc"), "w") as f:
            for infl, base in sorted(EXC[name]):
                f.write(f"{infl} {base}\n")


def line_offset(path, line):
    data = open(path, "rb").read()
    return data.index((line + "\n").encode())


def render(s, by_key, offsets):
    key, pos, ss_type, words, gloss, ptrs = s
    fields = [f"{offsets[key]:08d}", "00", ss_type, f"{len(words):02x}"]
    for w in words:
        fields += [w, "0"]
    fields.append(f"{len(ptrs):03d}")
    for sym, target, src, dst in ptrs:
        t = by_key[target]
        if src is None:
            st = "0000"
        else:
            st = f"{words.index(src) + 1:02x}{t[3].index(dst) + 1:02x}"
        fields += [sym, f"{offsets[target]:08d}", t[2], st]
    if pos == "v":
        fields += ["01", "+", "02", "00"]
    return " ".join(fields) + " | " + gloss + "  "


if __name__ == "__main__":
    main(sys.argv[1])
