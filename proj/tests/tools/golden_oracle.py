"""Reference cleaner for the golden tweet corpus.

Writes tests/data/golden_tweets.txt (corpus blocks) and
tests/data/golden_expected.txt (one cleaned document per line). The cleaner
below is written from the rules alone, using Python's unicodedata tables, and
shares no code with the C++ implementation.

Characters whose category or case mapping differs between the Python and ICU
Unicode versions (or that lowercase to several code points) are avoided.
"""

import pathlib
import re
import unicodedata

HERE = pathlib.Path(__file__).resolve().parent
DATA = HERE.parent / "data"

HINDI = {
    "achha", "accha", "bahut", "hai", "nahi", "kya", "yaar", "bhai", "kal", "aaj", "mast", "bura", "bekar",
    "acha", "kaise", "ho", "ghar", "sab", "log", "hum", "tum", "mera", "tera", "pyaar", "dil", "baat", "ki",
    "ka", "ke", "se", "ko", "mein", "bhi", "toh", "thik", "raha", "rahe", "gaya", "karo", "chalo", "wah",
}

TWEETS = [
    "#CoronaVirus",
    "@user #GoodDay hai !! http://x.co",
    "see http://t.co/ab1 now",
    "www.a.com x https://b.io/q?z=1",
    "@modi great speech",
    "email a@b stays? no",
    "wow!!! kya baat...",
    "...",
    "@only_mention",
    "http://only.url/path",
    "#COVID19Update aaj ka",
    "#HTMLParser bhi mast hai",
    "##DoubleHash yaar",
    "#One#Two#Three chain",
    "so#Cool tum ho",
    "#stay_home #stay_safe bhai",
    "# lonely hash",
    "#iPhone12 launch kal",
    "#2020Vision bura saal",
    "RT @bollywood_fan: Kya MOVIE thi!!! 😀😀 #MustWatch",
    "Aaj ka match was AMAZING 🏏🔥 #INDvsPAK",
    "bahut bekar service @airline_help 😡 #fail",
    "Happy Diwali sab ko ✨🪔 #HappyDiwali2021",
    "mera dil kehta hai... love you 3000 \u2764",
    "kal se gym pakka 💪 (shayad) #NewYearResolution",
    "thik hai bhai, see you tmrw!",
    "#MondayMotivation chalo kaam karo",
    "«quoted» text — with dash – and … ellipsis",
    "price is ₹500 or $7.99 + tax",
    "naïve café résumé ÉCOLE",
    "नमस्ते दोस्तों कैसे हो",
    "#नमस्ते_भारत",
    "mixed देसी style #DesiVibes",
    "tabs\tand  double  spaces",
    "nbsp here and　there",
    "under_score and hy-phen",
    "a-b_c",
    "@a@b@c",
    "@@handle",
    "HTTPS://LOUD.EXAMPLE/Path done",
    "check www.site.in/page?x=1&y=2, ok",
    "ye raha link:https://t.co/xyz",
    "#ABCdef #abcDEF #ABC123def",
    "100% sahi baat 👍👍👍",
    "1st 2nd 3rd place",
    "ⅫRoman numerals ½ half",
    "#Ünïcödé_Tag",
    "!!!???***",
    "@user1 @user2 @user3",
    "Okay... FINE. 🙄 whatever #SoBored #NotAgain",
]


def is_word(c):
    return c == "_" or unicodedata.category(c)[0] in "LMN"


WHITE_SPACE = set(range(0x09, 0x0E)) | {0x20, 0x85, 0xA0, 0x1680, 0x2028, 0x2029, 0x202F, 0x205F, 0x3000}
WHITE_SPACE |= set(range(0x2000, 0x200B))


def is_space(c):
    return ord(c) in WHITE_SPACE


def strip_urls(s):
    out, i = [], 0
    while i < len(s):
        if any(s[i:i + len(p)].isascii() and s[i:i + len(p)].lower() == p for p in ("http://", "https://", "www.")):
            while i < len(s) and not is_space(s[i]):
                i += 1
        else:
            out.append(s[i])
            i += 1
    return "".join(out)


def strip_mentions(s):
    out, i = [], 0
    while i < len(s):
        if s[i] == "@" and i + 1 < len(s) and is_word(s[i + 1]):
            i += 1
            while i < len(s) and is_word(s[i]):
                i += 1
        else:
            out.append(s[i])
            i += 1
    return "".join(out)


def char_class(c):
    cat = unicodedata.category(c)
    if c == "_":
        return "_"
    if cat[0] == "N":
        return "d"
    if cat in ("Lu", "Lt"):
        return "U"
    return "l"


SEGMENT = re.compile(r"U+(?=Ul)|U+(?!l)|Ul*|l+|d+")


def segment(body):
    words = []
    for part in body.split("_"):
        classes = "".join(char_class(c) for c in part)
        for m in SEGMENT.finditer(classes):
            words.append(part[m.start():m.end()])
    return words


def extract_hashtags(s):
    out, i = [], 0
    while i < len(s):
        if s[i] != "#":
            out.append(s[i])
            i += 1
            continue
        j = i
        while j < len(s) and s[j] == "#":
            j += 1
        k = j
        while k < len(s) and is_word(s[k]):
            k += 1
        if k == j:
            out.append(s[i:j])
        else:
            words = segment(s[j:k])
            if words and out and out[-1] and is_word(out[-1][-1]):
                out.append(" ")
            out.append(" ".join(words))
        i = k
    return "".join(out)


def strip_punct(s):
    return "".join(" " if unicodedata.category(c)[0] in "PS" else c for c in s)


def contract(s):
    words, cur = [], []
    for c in s:
        if is_space(c):
            if cur:
                words.append("".join(cur))
                cur = []
        else:
            cur.append(c)
    if cur:
        words.append("".join(cur))
    return " ".join(words)


def clean(tokens):
    s = " ".join(tokens)
    for step in (strip_urls, strip_mentions, extract_hashtags, strip_punct, contract):
        s = step(s)
    return [w for w in s.lower().split(" ") if w]


def tag(token):
    if not any(unicodedata.category(c)[0] == "L" for c in token):
        return "O"
    if token[0] in "#@" or "://" in token or token.lower().startswith("www."):
        return "O"
    if token.lower().strip(".,!?") in HINDI or any("ऀ" <= c <= "ॿ" for c in token):
        return "HIN"
    return "ENG"


def tokens_of(text):
    return [t for t in re.split("[ \t]+", text) if t]


def main():
    labels = ["positive", "neutral", "negative"]
    blocks, expected = [], []
    for n, text in enumerate(TWEETS):
        toks = tokens_of(text)
        assert toks, text
        for c in text:
            assert not ("\x1c" <= c <= "\x1f"), text
            assert len(c.lower()) == 1, text
        block = [f"meta g{n + 1:02d} {labels[n % 3]}"] + [f"{t}\t{tag(t)}" for t in toks]
        blocks.append("\n".join(block) + "\n")
        expected.append(" ".join(clean(toks)) + "\n")
    assert len(TWEETS) == 50
    (DATA / "golden_tweets.txt").write_text("\n".join(blocks), encoding="utf-8")
    (DATA / "golden_expected.txt").write_text("".join(expected), encoding="utf-8")


if __name__ == "__main__":
    main()
