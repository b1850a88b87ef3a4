"""Command-line front end: configuration loading, expression parsing, report emission."""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import lcm
from pathlib import Path

import jsonschema

from . import ratmat as rm
from .cartan import CartanDatum, build_cartan
from .errors import InconsistentData, InputError, MpqueaError, ParseError, SchemaError, UnknownGenerator
from .freealg import AlgebraElement, Word, irreducible_words
from .lattice import Lattice, as_twist, q_psi, root_lattice, scaled_root_lattice, weight_lattice
from .mpmatrix import (
    approx_equivalent,
    canonical_of,
    dynkin_diagram,
    equivalence_witness,
    is_cartan_type,
    psi_from_sigma,
    sigma_from_psi,
    theta,
    twist_equivalent,
    xi,
)
from .qscalar import FieldScalar, context, render_scalar
from .quantumalg import (
    AlgebraSpec,
    HopfSpec,
    ToralCocycle,
    _flavor_lattice,
    build_jimbo,
    build_mpquea,
    canonical_pairing_context,
    deformed_product,
    pairing_context,
)
from .twist import build_twquea, hopf_subalgebra_condition, twisted_generators
from . import verify as V

MAX_DEGREE_BOUND = 8
SUITES = ("duality", "iso-double", "iso-borel", "iso-g", "cocycle-equiv", "approx-iso", "hopf")
MP_ACTIONS = ("theta", "xi", "sigma", "psi-from-sigma", "canonical", "cartan-type", "equiv", "witness", "approx", "dynkin")


def _schema(name: str) -> dict:
    return json.loads(resources.files("mpquea").joinpath("schemas", name).read_text())


# configuration


@dataclass
class RunConfig:
    cartan: CartanDatum
    psi: rm.Matrix | None = None
    R: rm.Matrix | None = None
    R2: rm.Matrix | None = None
    S: rm.Matrix | None = None
    lattices: dict = field(default_factory=dict)
    flavor: str = "full"
    convention: str = "mp"
    degree_bound: int = 4
    seed: int = 0
    output: str = "text"
    N: int = 1

    def lattice(self, key: str) -> Lattice:
        return self.lattices.get(key) or root_lattice(self.cartan)

    def echo(self) -> dict:
        d = {"cartan": rm.to_json(self.cartan.A), "N": self.N, "degree_bound": self.degree_bound, "seed": self.seed}
        for k in ("psi", "R", "R2", "S"):
            v = getattr(self, k)
            if v is not None:
                d[k] = rm.to_json(v)
        return d


def _load_source(source) -> dict:
    if isinstance(source, dict):
        return source
    text = str(source)
    p = Path(text)
    if not text.lstrip().startswith("{") and p.exists():
        text = p.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config is not valid JSON: {exc.msg}", f"char {exc.pos}") from exc
    if not isinstance(data, dict):
        raise SchemaError("config must be a JSON object", "")
    return data


def _matrix(data, key: str, n: int) -> rm.Matrix | None:
    if key not in data:
        return None
    m = rm.mat(data[key])
    if len(m) != n or any(len(r) != n for r in m):
        raise InconsistentData(f"{key} must be {n}x{n} for a rank-{n} Cartan matrix")
    return m


def _lattice(spec, cartan: CartanDatum, psi, key: str) -> Lattice:
    n = cartan.rank
    if isinstance(spec, str):
        if spec == "Q":
            return root_lattice(cartan)
        if spec == "P":
            return weight_lattice(cartan)
        if spec == "Q^Psi":
            if psi is None:
                raise InconsistentData(f"lattice {key} = Q^Psi needs psi")
            return q_psi(cartan, psi)
        return scaled_root_lattice(cartan, Fraction(1, int(spec[2:])))
    basis = rm.mat(spec)
    if any(len(r) != n for r in basis):
        raise InconsistentData(f"lattice {key} needs vectors of length {n}")
    L = Lattice.from_generators(basis, n)
    if L.rank != n:
        raise InconsistentData(f"lattice {key} is not of full rank")
    return L


def parse_config(source) -> RunConfig:
    """Validate a JSON config (dict, JSON text or path) and resolve it into a RunConfig."""
    data = _load_source(source)
    validator = jsonschema.Draft202012Validator(_schema("config.schema.json"))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = "/" + "/".join(str(p) for p in e.absolute_path)
        raise SchemaError(f"{path}: {e.message}", path)
    cartan = build_cartan(data["cartan"])
    n = cartan.rank
    psi = _matrix(data, "psi", n)
    R = _matrix(data, "R", n)
    R2 = _matrix(data, "R2", n)
    S = _matrix(data, "S", n)
    if data.get("assert_cartan_type", True):
        for key, m in (("R", R), ("R2", R2)):
            if m is not None and not is_cartan_type(cartan, m):
                raise InconsistentData(f"{key} is not of Cartan type for this Cartan matrix", )
    if psi is not None and R is not None and theta(cartan, psi) != R:
        raise InconsistentData("R differs from theta(psi)")
    lattices = {k: _lattice(v, cartan, psi, k) for k, v in data.get("lattices", {}).items()}
    N = 1
    for m in (psi, R, R2, S, *(L.basis for L in lattices.values())):
        if m is not None:
            N = lcm(N, rm.common_denominator(m))
    return RunConfig(
        cartan,
        psi,
        R,
        R2,
        S,
        lattices,
        data.get("flavor", "full"),
        data.get("convention", "mp"),
        data.get("degree_bound", 4),
        data.get("seed", 0),
        data.get("output", "text"),
        N,
    )


# expressions

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _Parser:
    """Recursive descent over the expression grammar given in the README."""

    def __init__(self, spec: AlgebraSpec, text: str):
        self.spec = spec
        self.sys = spec.system
        self.text = text.replace("−", "-")
        self.toks = []
        pos = 0
        while pos < len(self.text):
            m = _TOKEN.match(self.text, pos)
            if m is None:
                break
            if m.group(1):
                self.toks.append(("num", m.group(1), m.start(1)))
            elif m.group(2):
                self.toks.append(("id", m.group(2), m.start(2)))
            elif m.group(3):
                self.toks.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op: str):
        t = self.take()
        if t[1] != op or t[0] not in ("op",):
            raise ParseError(f"expected {op!r}", t[2])
        return t

    def parse(self) -> AlgebraElement:
        if not self.toks:
            raise ParseError("empty expression", 0)
        x = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return x

    def expr(self) -> AlgebraElement:
        sign = 1
        if self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        x = self.term()
        if sign < 0:
            x = -x
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            y = self.term()
            x = x + y if op == "+" else x - y
        return x

    def term(self) -> AlgebraElement:
        x = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op, _, pos = self.take()[1], None, self.peek()[2]
            y = self.factor()
            x = x * y if op == "*" else x * self._inverse_scalar(y, pos)
        return x

    def _inverse_scalar(self, y: AlgebraElement, pos: int) -> FieldScalar:
        c = _scalar_of(y)
        if c is None:
            raise ParseError("division by a non-scalar", pos)
        if not c:
            raise ParseError("division by zero", pos)
        return c.inv()

    def factor(self) -> AlgebraElement:
        t = self.peek()
        if t[0] == "id" and t[1] == "q":
            self.take()
            r = Fraction(1)
            if self.peek()[1] == "^" and self.peek()[0] == "op":
                self.take()
                r = self.exponent(rational=True)
            return self.sys.scalar(context(lcm(self.spec.N, r.denominator)).q_power(r))
        x = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            pos = self.take()[2]
            k = self.exponent(rational=False)
            return self._power(x, int(k), pos)
        return x

    def _power(self, x: AlgebraElement, k: int, pos: int) -> AlgebraElement:
        if k >= 0:
            return x**k
        c = _scalar_of(x)
        if c is not None:
            if not c:
                raise ParseError("negative power of zero", pos)
            return self.sys.scalar(c.inv() ** (-k))
        if len(x.terms) == 1:
            (w, c), = x.terms.items()
            if w.is_toral:
                inv = AlgebraElement(self.sys, {self.sys.toral_word(rm.vneg(w.t)): c.inv()})
                return inv**(-k)
        raise ParseError("negative power of a non-invertible factor", pos)

    def exponent(self, rational: bool) -> Fraction:
        t = self.peek()
        if t[0] == "op" and t[1] in ("(", "{"):
            self.take()
            r = self.signed_rational()
            self.expect(")" if t[1] == "(" else "}")
        else:
            neg = False
            if t[0] == "op" and t[1] == "-":
                self.take()
                neg = True
            u = self.take()
            if u[0] != "num":
                raise ParseError("expected an exponent", u[2])
            r = Fraction(int(u[1])) * (-1 if neg else 1)
        if not rational and r.denominator != 1:
            raise ParseError("only q takes rational exponents", t[2])
        return r

    def signed_rational(self) -> Fraction:
        neg = False
        t = self.peek()
        if t[0] == "op" and t[1] in ("-", "+"):
            neg = self.take()[1] == "-"
        u = self.take()
        if u[0] != "num":
            raise ParseError("expected a number", u[2])
        r = Fraction(int(u[1]))
        if self.peek()[1] == "/" and self.peek()[0] == "op":
            self.take()
            d = self.take()
            if d[0] != "num" or int(d[1]) == 0:
                raise ParseError("expected a nonzero denominator", d[2])
            r /= int(d[1])
        return -r if neg else r

    def atom(self) -> AlgebraElement:
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return self.sys.scalar(int(val))
        if kind == "op" and val == "(":
            x = self.expr()
            self.expect(")")
            return x
        if kind == "id":
            return self.generator(val, pos)
        raise ParseError(f"unexpected {val!r}" if val else "unexpected end of input", pos)

    def generator(self, name: str, pos: int) -> AlgebraElement:
        n = self.spec.n
        m = re.fullmatch(r"([EF])(\d+)", name)
        if m:
            i = int(m.group(2)) - 1
            have = self.sys.has_E if m.group(1) == "E" else self.sys.has_F
            if not 0 <= i < n or not have:
                raise UnknownGenerator(f"unknown generator {name}", pos)
            return self.sys.word([(m.group(1), i)])
        if name in ("K", "L"):
            self.expect("[")
            coords = [self.signed_rational()]
            while self.peek()[1] == ",":
                self.take()
                coords.append(self.signed_rational())
            self.expect("]")
            if len(coords) != n:
                raise ParseError(f"{name}[...] needs {n} coordinates", pos)
            z = (Fraction(0),) * n
            v = tuple(coords) + z if name == "K" else z + tuple(coords)
            return self.sys.word([("T", v)])
        raise UnknownGenerator(f"unknown generator {name}", pos)


def _scalar_of(x: AlgebraElement) -> FieldScalar | None:
    if not x.terms:
        return x.system.ctx.zero
    if len(x.terms) == 1:
        (w, c), = x.terms.items()
        if w == Word((), None, ()):
            return c
    return None


def parse_expression(spec, text: str) -> AlgebraElement:
    """Parse text into an element of the algebra (AlgebraSpec or HopfSpec)."""
    if isinstance(spec, HopfSpec):
        spec = spec.spec
    return _Parser(spec, text).parse()


# algebra construction from a config


def _R_of(cfg: RunConfig) -> rm.Matrix:
    if cfg.R is not None:
        return cfg.R
    if cfg.psi is not None:
        return theta(cfg.cartan, cfg.psi)
    return cfg.cartan.DA


def _algebra(cfg: RunConfig, flavor: str | None = None) -> HopfSpec:
    flavor = flavor or cfg.flavor
    gp, gm = cfg.lattice("gamma_plus"), cfg.lattice("gamma_minus")
    if cfg.convention == "jimbo":
        n = cfg.cartan.rank
        return build_jimbo(cfg.cartan, _flavor_lattice(n, gp, gm, flavor), flavor, root_order=cfg.N)
    return build_mpquea(cfg.cartan, _R_of(cfg), gp, gm, flavor, root_order=cfg.N)


def _need(cfg: RunConfig, *keys: str) -> None:
    for k in keys:
        if getattr(cfg, k) is None:
            raise InputError(f"this command needs --{k}")


# subcommands; each returns (text, json payload, exit code)


def cmd_mp(cfg: RunConfig, args):
    c = cfg.cartan
    a = args.action
    code = 0
    if a == "theta":
        _need(cfg, "psi")
        res = theta(c, cfg.psi)
    elif a == "xi":
        _need(cfg, "R")
        res = xi(c, cfg.R).psi
    elif a == "sigma":
        _need(cfg, "psi")
        res = sigma_from_psi(c, cfg.psi).S
    elif a == "psi-from-sigma":
        _need(cfg, "S")
        res = psi_from_sigma(c, cfg.S).psi
    elif a == "canonical":
        _need(cfg, "R")
        res = canonical_of(c, cfg.R)
    elif a == "witness":
        _need(cfg, "R", "R2")
        res = equivalence_witness(cfg.R, cfg.R2)
    if a in ("theta", "xi", "sigma", "psi-from-sigma", "canonical", "witness"):
        return rm.fmt_matrix(res), {"action": a, "result": rm.to_json(res)}, 0
    if a == "cartan-type":
        _need(cfg, "R")
        ok = is_cartan_type(c, cfg.R)
        return ("Cartan type" if ok else "not Cartan type"), {"action": a, "result": ok}, 0 if ok else 1
    if a == "equiv":
        _need(cfg, "R", "R2")
        ok = twist_equivalent(cfg.R, cfg.R2)
        return ("equivalent" if ok else "not equivalent"), {"action": a, "result": ok}, 0 if ok else 1
    if a == "approx":
        _need(cfg, "R", "R2")
        r = approx_equivalent(cfg.R, cfg.R2)
        if r is None:
            return "not approximately equivalent", {"action": a, "result": None}, 1
        gamma = [g + 1 for g in r.gamma]
        mode = "chevalley" if r.chevalley else "plain"
        return f"gamma = {gamma} ({mode})", {"action": a, "result": {"gamma": gamma, "chevalley": r.chevalley}}, 0
    _need(cfg, "R")
    d = dynkin_diagram(cfg.R)
    payload = {
        "vertices": [rm.fmt_frac(v) for v in d.vertices],
        "edges": [[i + 1, j + 1, rm.fmt_frac(w)] for i, j, w in d.edges],
    }
    return d.render(), {"action": a, "result": payload}, code


def cmd_build(cfg: RunConfig, args):
    h = _algebra(cfg)
    s = h.spec
    summ = s.summary()
    Q = root_lattice(cfg.cartan)
    summ["lattice_index"] = {
        k: rm.fmt_frac(cfg.lattice(k).index_over(Q)) for k in ("gamma_plus", "gamma_minus")
    }
    if s.system.has_E:
        words = irreducible_words(s.system, "E", cfg.degree_bound)
        summ["pbw_counts"] = [len(words.get(d, [])) for d in range(cfg.degree_bound + 1)]
    lines = [f"{k}: {json.dumps(v)}" for k, v in summ.items()]
    return "\n".join(lines), summ, 0


def cmd_reduce(cfg: RunConfig, args):
    h = _algebra(cfg)
    x = parse_expression(h, args.expression)
    return x.render(), {"input": args.expression, "normal_form": x.render()}, 0


def cmd_pair(cfg: RunConfig, args):
    gp, gm = cfg.lattice("gamma_plus"), cfg.lattice("gamma_minus")
    if cfg.convention == "jimbo":
        ctx = canonical_pairing_context(cfg.cartan, gp, gm, root_order=cfg.N)
    else:
        ctx = pairing_context(cfg.cartan, _R_of(cfg), gp, gm, root_order=cfg.N)
    x = parse_expression(ctx.positive, args.x)
    y = parse_expression(ctx.negative, args.y)
    v = render_scalar(ctx.eval(x, y))
    return v, {"x": args.x, "y": args.y, "value": v, "pairing": ctx.name}, 0


def cmd_cocycle(cfg: RunConfig, args):
    S = cfg.S
    if S is None:
        _need(cfg, "psi")
        S = sigma_from_psi(cfg.cartan, cfg.psi).S
    h = _algebra(cfg)
    sigma = ToralCocycle(h, S)
    x = parse_expression(h, args.x)
    y = parse_expression(h, args.y)
    out = {
        "S": rm.to_json(S),
        "sigma": render_scalar(sigma.eval(x, y)),
        "sigma_inverse": render_scalar(sigma.eval(x, y, inverse=True)),
        "deformed_product": deformed_product(sigma, x, y).render(),
    }
    text = "\n".join(f"{k}: {v if isinstance(v, str) else rm.fmt_matrix(S)}" for k, v in out.items())
    return text, out, 0


def cmd_twist(cfg: RunConfig, args):
    _need(cfg, "psi")
    c = cfg.cartan
    psi = as_twist(cfg.psi)
    psi.require_antisymmetric()
    L = cfg.lattices.get("M") or q_psi(c, psi)
    ok, w = hopf_subalgebra_condition(c, psi, L)
    payload = {"psi": rm.to_json(psi.psi), "lattice": rm.to_json(L.basis), "subalgebra_condition": ok}
    lines = [f"subalgebra condition: {'holds' if ok else 'fails'}"]
    if not ok:
        payload["witness"] = {"map": w["map"], "index": w["index"], "image": [rm.fmt_frac(x) for x in w["image"]]}
        lines.append(f"  {w['map']}(alpha_{w['index']}) = {payload['witness']['image']} is outside the lattice")
        return "\n".join(lines), payload, 1
    t = build_twquea(c, psi, L, flavor=args.carrier)
    tables = {}
    for i in range(c.rank):
        for name, has, gen in (("E", t.system.has_E, t.spec.E), ("F", t.system.has_F, t.spec.F)):
            if not has:
                continue
            x = gen(i)
            tables[f"Delta({name}{i + 1})"] = t.coproduct(x).render()
            tables[f"S({name}{i + 1})"] = t.antipode(x).render()
    g = twisted_generators(t)
    for i in range(c.rank):
        for key, vals in (("E^Psi", g.E), ("F^Psi", g.F)):
            if vals and vals[i] is not None:
                tables[f"{key}_{i + 1}"] = vals[i].render()
    payload["tables"] = tables
    lines += [f"{k} = {v}" for k, v in tables.items()]
    return "\n".join(lines), payload, 0


def _psi_or_seeded(cfg: RunConfig, stable: bool = False):
    if cfg.psi is not None:
        return cfg.psi
    if cfg.cartan.rank < 2:
        return rm.zeros(1)
    pick = V.seeded_stable_psis if stable else V.seeded_psis
    return pick(cfg.cartan, cfg.seed, 1)[0]


def run_suite(cfg: RunConfig, suite: str, gamma=None, chevalley: bool = False) -> V.VerificationReport:
    c = cfg.cartan
    L = cfg.lattices
    if suite == "duality":
        return V.verify_duality(c, _psi_or_seeded(cfg), cfg.S, L.get("gamma_plus"), L.get("gamma_minus"), seed=cfg.seed)
    if suite == "iso-double":
        return V.verify_iso_double(c, _psi_or_seeded(cfg), L.get("gamma_plus"), L.get("gamma_minus"))
    if suite == "iso-borel":
        flavor = cfg.flavor if cfg.flavor != "full" else "borel_plus"
        return V.verify_iso_borel(c, _psi_or_seeded(cfg), L.get("M"), flavor)
    if suite == "iso-g":
        return V.verify_iso_g(c, _psi_or_seeded(cfg, stable=True), L.get("M"))
    if suite == "cocycle-equiv":
        R1 = cfg.R if cfg.R is not None else c.DA
        R2 = cfg.R2 if cfg.R2 is not None else theta(c, _psi_or_seeded(cfg))
        return V.verify_cocycle_equiv(c, R1, R2, L.get("gamma_plus"), L.get("gamma_minus"))
    if suite == "approx-iso":
        g = gamma if gamma is not None else list(range(c.rank))
        return V.verify_approx_iso(c, _R_of(cfg), g, chevalley)
    return V.verify_hopf(c, cfg.R, L.get("M"), cfg.degree_bound, cfg.psi if cfg.R is None else None)


def cmd_verify(cfg: RunConfig, args):
    gamma = None
    if args.gamma:
        try:
            gamma = [int(x) - 1 for x in args.gamma.split(",")]
        except ValueError as exc:
            raise InputError("--gamma expects a comma-separated permutation such as 2,1") from exc
    rep = run_suite(cfg, args.suite, gamma, args.chevalley)
    return rep.render(), rep.to_dict(include_timing=not args.no_timing), 0 if rep.passed else 1


# argument handling


def _matrix_arg(text: str):
    """Accept [[0,1/6],[-1/6,0]]: bare rationals are quoted before JSON decoding."""
    quoted = re.sub(r"(-?\d+\s*/\s*\d+)", r'"\1"', text.replace("−", "-"))
    try:
        return json.loads(quoted)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"cannot read matrix {text!r}: {exc.msg}", "") from exc


def _lattice_arg(text: str):
    return text if re.fullmatch(r"Q|P|Q\^Psi|Q/\d+", text) else _matrix_arg(text)


def build_config(args) -> RunConfig:
    data = dict(_load_source(args.config)) if args.config else {}
    if args.type is not None:
        data["cartan"] = args.type if not args.type.strip().startswith("[") else _matrix_arg(args.type)
    for key in ("psi", "R", "R2", "S"):
        v = getattr(args, key)
        if v is not None:
            data[key] = _matrix_arg(v)
    lat = dict(data.get("lattices", {}))
    if args.lattice is not None:
        for k in ("gamma_plus", "gamma_minus", "M"):
            lat[k] = _lattice_arg(args.lattice)
    for k in ("gamma_plus", "gamma_minus", "M"):
        v = getattr(args, k)
        if v is not None:
            lat[k] = _lattice_arg(v)
    if lat:
        data["lattices"] = lat
    for key in ("flavor", "convention", "seed", "degree_bound"):
        v = getattr(args, key)
        if v is not None:
            data[key] = v
    if args.json:
        data["output"] = "json"
    if args.no_cartan_check:
        data["assert_cartan_type"] = False
    if "cartan" not in data:
        raise SchemaError("a Cartan type is required (--type or config)", "/cartan")
    return parse_config(data)


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file or inline JSON")
    common.add_argument("--type", help="Cartan type name (A2, B2, ...) or matrix")
    common.add_argument("--psi", help="antisymmetric rational matrix, e.g. [[0,1/6],[-1/6,0]]")
    common.add_argument("--R", help="multiparameter exponent matrix")
    common.add_argument("--R2", help="second multiparameter (equiv, approx, cocycle-equiv)")
    common.add_argument("--S", help="cocycle matrix")
    common.add_argument("--lattice", help="Q, P, Q^Psi, Q/k or a basis; sets every lattice")
    common.add_argument("--gamma-plus", dest="gamma_plus")
    common.add_argument("--gamma-minus", dest="gamma_minus")
    common.add_argument("--M", dest="M")
    common.add_argument("--flavor", choices=("full", "borel_plus", "borel_minus"))
    common.add_argument("--convention", choices=("mp", "jimbo"))
    common.add_argument("--seed", type=int)
    common.add_argument("--degree-bound", dest="degree_bound", type=int)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--no-cartan-check", action="store_true", help="accept R not of Cartan type")

    p = argparse.ArgumentParser(prog="mpquea", description="Multiparameter and twisted quantum groups, exactly.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("mp", parents=[common], help="multiparameter conversions and tests")
    s.add_argument("action", choices=MP_ACTIONS)
    sub.add_parser("build", parents=[common], help="build an algebra and print its summary")
    s = sub.add_parser("reduce", parents=[common], help="normal form of an expression")
    s.add_argument("expression")
    s = sub.add_parser("pair", parents=[common], help="evaluate the Borel pairing")
    s.add_argument("x")
    s.add_argument("y")
    s = sub.add_parser("cocycle", parents=[common], help="toral cocycle value and deformed product")
    s.add_argument("x")
    s.add_argument("y")
    s = sub.add_parser("twist", parents=[common], help="twisted tables and the subalgebra condition")
    s.add_argument("--carrier", choices=("single", "doubled", "borel_plus", "borel_minus"), default="single")
    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=SUITES)
    s.add_argument("--gamma", help="permutation for approx-iso, 1-based, e.g. 2,1")
    s.add_argument("--chevalley", action="store_true")
    s.add_argument("--no-timing", action="store_true", help="omit timing for byte-stable JSON")
    return p


COMMANDS = {
    "mp": cmd_mp,
    "build": cmd_build,
    "reduce": cmd_reduce,
    "pair": cmd_pair,
    "cocycle": cmd_cocycle,
    "twist": cmd_twist,
    "verify": cmd_verify,
}


def _error_payload(exc: MpqueaError) -> dict:
    d = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("position", "path"):
        v = getattr(exc, attr, None)
        if v not in (None, ""):
            d[attr] = v
    return d


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if args.degree_bound is not None and args.degree_bound > MAX_DEGREE_BOUND:
        print(f"error: --degree-bound is capped at {MAX_DEGREE_BOUND}", file=sys.stderr)
        return 2
    try:
        cfg = build_config(args)
        text, payload, code = COMMANDS[args.command](cfg, args)
    except InputError as exc:
        _emit_error(args, exc)
        return 2
    except MpqueaError as exc:
        _emit_error(args, exc)
        return 1
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)
    return code


def _emit_error(args, exc: MpqueaError) -> None:
    if args.json:
        print(json.dumps(_error_payload(exc), indent=2, sort_keys=True))
    else:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
