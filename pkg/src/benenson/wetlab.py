"""DNA rendering of automata for a type IIS restriction enzyme.

Conventions:

* symbols map to bases through a bijection, by default the alphabet order
  onto A, C, G, T;
* the state duplex has the top strand ``sigma`` and a bottom strand covering
  ``sigma[S:]``, so the first S bases form a 5' overhang (the first sticky end);
* a rule molecule is the recognition site, a spacer of ``top_cut - d`` duplex
  bases and an overhang that pairs with the rule's sticky end.  After
  ligation the recognition site sits ``top_cut`` bases before the next cut,
  which removes exactly ``d`` bases of the state.

The output loop that reports acceptance is not modelled; the accept
position is written into the bundle header instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .core import Alphabet, BenensonAutomaton, CuttingRule, check_determinism, reachable_offsets, run
from .errors import GeometryError, MalformedError, PreconditionError, ProfileMismatchError, UnsupportedAlphabetError

BASES = "ACGT"
COMPLEMENT = {"A": "T", "T": "A", "C": "G", "G": "C"}


@dataclass(frozen=True)
class EnzymeProfile:
    name: str
    recognition: str
    top_cut: int
    bottom_cut: int

    def __post_init__(self):
        if set(self.recognition) - set(BASES) or not self.recognition:
            raise ValueError("recognition site must be a non-empty ACGT string")
        if self.top_cut < 1 or self.sticky_size < 1:
            raise ValueError("need top_cut >= 1 and bottom_cut > top_cut")

    @property
    def sticky_size(self) -> int:
        return self.bottom_cut - self.top_cut


FOKI = EnzymeProfile("FokI", "GGATG", 9, 13)


def load_profile(text: str) -> EnzymeProfile:
    """Parse ``key value`` lines: name, recognition, top_cut, bottom_cut."""
    kv = {}
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        key, _, value = ln.replace("=", " ").replace(":", " ").partition(" ")
        kv[key.strip()] = value.strip()
    try:
        return EnzymeProfile(kv["name"], kv["recognition"].upper(), int(kv["top_cut"]), int(kv["bottom_cut"]))
    except KeyError as exc:
        raise MalformedError(f"profile is missing {exc}") from exc
    except ValueError as exc:
        raise MalformedError(str(exc)) from exc


def complement(bases: str) -> str:
    return "".join(COMPLEMENT[b] for b in bases)


def reverse_complement(bases: str) -> str:
    return complement(bases)[::-1]


def base_map(alphabet: Alphabet, bases: str = BASES) -> dict[str, str]:
    if len(alphabet) != 4:
        raise UnsupportedAlphabetError("DNA rendering needs a 4-symbol alphabet")
    if sorted(bases) != sorted(BASES):
        raise ValueError("base map must be a permutation of ACGT")
    return dict(zip(alphabet.symbols, bases))


def rule_molecule(rule: CuttingRule, profile: EnzymeProfile, to_base: dict) -> str:
    if rule.dist > profile.top_cut:
        raise GeometryError(f"rule {rule}: cut {rule.dist} exceeds the enzyme's reach {profile.top_cut}")
    spacer = ("AT" * profile.top_cut)[: profile.top_cut - rule.dist]
    return profile.recognition + spacer + complement("".join(to_base[s] for s in rule.sticky))


def emit_molecules(aut: BenensonAutomaton, profile: EnzymeProfile = FOKI, bases: str = BASES) -> str:
    if aut.S != profile.sticky_size:
        raise ProfileMismatchError(f"automaton S={aut.S} but {profile.name} leaves {profile.sticky_size}-base ends")
    if aut.D > profile.top_cut:
        raise GeometryError(f"cutting range D={aut.D} exceeds {profile.name} top_cut {profile.top_cut}")
    to_base = base_map(aut.alphabet, bases)
    top = "".join(to_base[s] for s in aut.state)
    lines = [
        f"# enzyme {profile.name} recognition {profile.recognition} "
        f"top_cut {profile.top_cut} bottom_cut {profile.bottom_cut}",
        f"# sigma {aut.alphabet} bases {bases}",
        f"# n {aut.n} S {aut.S} D {aut.D}",
        f"# accept_pos {aut.accept_pos} (output loop not rendered)",
        ">state_top",
        top,
        ">state_bottom",
        reverse_complement(top[aut.S :]),
    ]
    for r in aut.canonical_rules():
        lines += [f">rule_{r.var}_{r.bit}_{r.sticky}_{r.dist}", rule_molecule(r, profile, to_base)]
    return "\n".join(lines) + "\n"


def parse_bundle(text: str) -> BenensonAutomaton:
    """Rebuild the automaton, re-deriving each rule's sticky end and cut from its molecule."""
    head, records, name = {}, {}, None
    for ln in text.splitlines():
        ln = ln.strip()
        if ln.startswith("#"):
            tok = ln[1:].split()
            head.update(zip(tok[::2], tok[1::2]))
        elif ln.startswith(">"):
            name = ln[1:]
            records[name] = ""
        elif ln:
            if name is None:
                raise MalformedError("sequence line before any record")
            records[name] += ln
    try:
        profile = EnzymeProfile(head["enzyme"], head["recognition"], int(head["top_cut"]), int(head["bottom_cut"]))
        alphabet = Alphabet(head["sigma"])
        to_sym = {b: s for s, b in base_map(alphabet, head["bases"]).items()}
        S, n, D = int(head["S"]), int(head["n"]), int(head["D"])
        state = "".join(to_sym[b] for b in records.pop("state_top"))
        bottom = records.pop("state_bottom")
        if bottom != reverse_complement("".join(head["bases"][alphabet.symbols.index(s)] for s in state[S:])):
            raise MalformedError("bottom strand does not pair with the top strand")
        rules = []
        for name, seq in records.items():
            tag, var, bit, _, _ = name.split("_")
            if tag != "rule" or not seq.startswith(profile.recognition):
                raise MalformedError(f"bad rule record {name!r}")
            overhang = seq[len(seq) - S :]
            spacer = len(seq) - len(profile.recognition) - S
            omega = "".join(to_sym[b] for b in complement(overhang))
            rules.append(CuttingRule(int(var), int(bit), omega, profile.top_cut - spacer))
        return BenensonAutomaton(alphabet, n, S, D, state, frozenset(rules), int(head["accept_pos"]))
    except (KeyError, ValueError) as exc:
        if isinstance(exc, MalformedError):
            raise
        raise MalformedError(f"bad bundle: {exc}") from exc


@dataclass
class PlausibilityReport:
    nick_adjacent: list = field(default_factory=list)  # d = 1
    out_of_reach: list = field(default_factory=list)  # d > top_cut
    self_complementary: list = field(default_factory=list)  # sticky ends pairing with themselves
    notes: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not (self.nick_adjacent or self.out_of_reach or self.self_complementary)

    def to_text(self) -> str:
        out = ["clean" if self.clean else "flagged"]
        out += [f"d=1 (cut next to a nick): {r}" for r in self.nick_adjacent]
        out += [f"d beyond enzyme reach: {r}" for r in self.out_of_reach]
        out += [f"self-complementary sticky end (hybridization hazard): {w}" for w in self.self_complementary]
        out += [f"note: {t}" for t in self.notes]
        return "\n".join(out)


def plausibility_check(aut: BenensonAutomaton, profile: EnzymeProfile = FOKI, bases: str = BASES) -> PlausibilityReport:
    rep = PlausibilityReport()
    rules = aut.canonical_rules()
    rep.nick_adjacent = [r for r in rules if r.dist == 1]
    rep.out_of_reach = [r for r in rules if r.dist > profile.top_cut]
    if len(aut.alphabet) == 4:
        to_base = base_map(aut.alphabet, bases)
        for w in sorted({r.sticky for r in rules}):
            b = "".join(to_base[s] for s in w)
            if b and b == reverse_complement(b):
                rep.self_complementary.append(w)
    else:
        rep.notes.append("self-complementarity not checked: alphabet is not 4 symbols")
    rep.notes.append("recognition sites inside the state molecule were not scanned for")
    return rep


def stem_margin(aut: BenensonAutomaton, *, exhaustive_limit: int = 16, samples: int = 4096, seed: int = 0):
    """Smallest gap between the accept position and the furthest offset of a rejecting run.

    Exhaustive over inputs for n <= exhaustive_limit, sampled otherwise.
    Returns None when no rejecting input is found (f is constantly 1).
    """
    if check_determinism(aut):
        raise PreconditionError("stem margin is defined for deterministic automata")
    if aut.n <= exhaustive_limit:
        inputs = product((0, 1), repeat=aut.n)
    else:
        r = random.Random(seed)
        inputs = (tuple(r.getrandbits(1) for _ in range(aut.n)) for _ in range(samples))
    best = None
    for x in inputs:
        if run(aut, x).accepted:
            continue
        gap = aut.accept_pos - max(reachable_offsets(aut, x))
        best = gap if best is None else min(best, gap)
    return best
