# SPDX-License-Identifier: Apache-2.0
"""Reference MTLD computed straight from the factor definition.

Run with no arguments to print the frozen corpus table used by the C++ tests
(tests/oracles/mtld_frozen.inc). The values there were produced by this script
and must not be edited by hand.

Definition followed here:
  * walk the tokens, keeping the type-token ratio of the current segment;
  * when the ratio drops to the threshold or below, count one factor and start
    a new segment;
  * a non-empty leftover segment adds (1 - ratio) / (1 - threshold);
  * the pass score is tokens / factors, or the token count when no factor
    accrued at all;
  * the result is the mean of the forward and the reversed pass.
"""

import sys

THRESHOLD = 0.72


def one_pass(tokens, threshold=THRESHOLD):
    factors = 0.0
    segment = []
    for token in tokens:
        segment.append(token)
        ratio = len(set(segment)) / len(segment)
        if ratio <= threshold:
            factors += 1.0
            segment = []
    if segment:
        ratio = len(set(segment)) / len(segment)
        factors += (1.0 - ratio) / (1.0 - threshold)
    if factors == 0.0:
        return float(len(tokens))
    return len(tokens) / factors


def mtld(tokens, threshold=THRESHOLD):
    folded = [t.casefold() for t in tokens]
    return (one_pass(folded, threshold) + one_pass(list(reversed(folded)), threshold)) / 2.0


CORPORA = [
    "a a a a",
    "the cat sat on the mat",
    "a b c d",
    "a",
    "a b",
    "a a",
    "a b a b a b a b",
    "the quick brown fox jumps over the lazy dog",
    "The the THE tHe",
    "to be or not to be that is the question",
    "one fish two fish red fish blue fish",
    "it was the best of times it was the worst of times it was the age of wisdom it was the age of foolishness",
    "buffalo buffalo buffalo buffalo buffalo buffalo buffalo buffalo",
    "a b c a b c a b c a b c a b c",
    "x y z x y x z y y x z z x y",
    "we hold these truths to be self evident that all men are created equal that they are endowed",
    "rose is a rose is a rose is a rose",
    "data data science science data science model model data",
    "alpha beta gamma delta epsilon zeta eta theta iota kappa lambda mu",
    "I think I can I think I can I think I can I know I can",
    "so so so so so so so so so so so so so so so so so so so so",
    "Straße STRASSE strasse road Road ROAD",
    "a b c d e f g h a b c d e f g h a b c d e f g h",
    "the cat and the hat and the bat and the rat sat on the mat with a hat",
]


def main():
    out = sys.stdout
    out.write("// SPDX-License-Identifier: Apache-2.0\n")
    out.write("// Generated by tests/oracles/mtld_reference.py. Do not edit.\n")
    for text in CORPORA:
        value = mtld(text.split())
        escaped = text.replace("\\", "\\\\").replace('"', '\\"')
        out.write('{{"{}", {!r}}},\n'.format(escaped, value))


if __name__ == "__main__":
    main()
