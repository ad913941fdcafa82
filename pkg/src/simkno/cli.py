"""Command line front end.

One JSON document on stdout per invocation (the ``soundness`` command
is the documented exception: it streams JSON lines, one record per
checked instance or violation).  Exit codes are uniform:

* 0 — success / positive result (holds, satisfiable, similarity, …)
* 1 — clean negative result (does not hold, no witness found,
  not a similarity model, violations found)
* 2 — error (unparsable formula, invalid model file, bad arguments)

``SIMKNO_SEED`` fixes the random sampler used by ``soundness`` (the
``--seed`` flag overrides it).  ``--pretty`` switches the single-line
JSON to an indented rendering; nothing else changes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import rewrite as _rewrite
from .formula import (Formula, ParseError, closure, expand_everyone, length,
                      parse, to_text)
from .model import (FIXTURE_NAMES, KripkeModel, ModelError, WeightedModel,
                    dump_model, fixture, load_model, validate)
from .satbench import SYSTEMS, bounded_sat, soundness_sweep
from .semantics import (UnsupportedOperatorError, kripke_satisfies, satisfies,
                        truthset)
from .translate import (reverse_translation, similarity_lift,
                        standard_translation)

__all__ = ["main"]


class _CliError(Exception):
    """Carries a message destined for stderr and exit code 2."""


def _emit(doc, pretty: bool) -> None:
    json.dump(doc, sys.stdout, indent=2 if pretty else None)
    sys.stdout.write("\n")


def _read_model(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}") from exc
    try:
        return load_model(text)
    except (ModelError, ValueError) as exc:
        raise _CliError(f"{path}: {exc}") from exc


def _read_weighted(path: str) -> WeightedModel:
    model = _read_model(path)
    if not isinstance(model, WeightedModel):
        raise _CliError(f"{path}: expected a weighted model "
                        "(file has 'relations', so it is relational)")
    return model


def _parse_formula(text: str) -> Formula:
    try:
        return parse(text)
    except ParseError as exc:
        raise _CliError(f"cannot parse formula: {exc}") from exc


def _split_agents(spec: str | None):
    if spec is None:
        return None
    agents = tuple(a.strip() for a in spec.split(",") if a.strip())
    if not agents:
        raise _CliError("--agents needs a non-empty comma-separated list")
    return agents


# ---------------------------------------------------------------------------
# commands

def _cmd_check(args) -> int:
    model = _read_model(args.model)
    phi = _parse_formula(args.formula)
    if args.state not in model.states:
        raise _CliError(f"unknown state {args.state!r}")
    try:
        if isinstance(model, KripkeModel):
            holds = kripke_satisfies(model, args.state, phi)
            members = [s for s in model.states
                       if kripke_satisfies(model, s, phi)]
        else:
            members = [s for s in model.states
                       if s in truthset(model, phi).members]
            holds = args.state in members
    except (UnsupportedOperatorError, ModelError) as exc:
        raise _CliError(str(exc)) from exc
    doc = {"holds": holds}
    if args.truthset:
        doc["truthset"] = members
    _emit(doc, args.pretty)
    return 0 if holds else 1


def _cmd_validate(args) -> int:
    model = _read_weighted(args.model)
    klass = validate(model)
    _emit({"symmetric": klass.is_symmetric, "positive": klass.is_positive},
          args.pretty)
    return 0 if klass.is_similarity else 1


def _cmd_translate(args) -> int:
    model = _read_model(args.model)
    if args.direction == "to-kripke":
        if not isinstance(model, WeightedModel):
            raise _CliError("to-kripke expects a weighted model")
        out = standard_translation(model)
    elif args.direction == "from-kripke":
        if not isinstance(model, KripkeModel):
            raise _CliError("from-kripke expects a relational model")
        out = reverse_translation(model)
    else:
        if not isinstance(model, WeightedModel):
            raise _CliError("lift expects a weighted model")
        try:
            out = similarity_lift(model)
        except ModelError as exc:
            raise _CliError(str(exc)) from exc
    text = dump_model(out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _emit({"written": args.out}, args.pretty)
    else:
        sys.stdout.write(text)
    return 0


_RULES = {
    "rho": (_rewrite.rho, False),
    "rho-prime": (_rewrite.rho_prime, False),
    "rho-t": (_rewrite.rho_t, True),
    "rho-s": (_rewrite.rho_s, True),
    "rho-m": (_rewrite.rho_m, True),
    "tau": (_rewrite.tau, False),
    "tau-prime": (_rewrite.tau_prime, False),
}


def _cmd_rewrite(args) -> int:
    phi = _parse_formula(args.formula)
    fn, takes_agents = _RULES[args.rule]
    agents = _split_agents(args.agents)
    if agents is not None and not takes_agents:
        raise _CliError("--agents only applies to the frame-class "
                        "rules rho-t, rho-s and rho-m")
    try:
        result = fn(phi, agents=agents) if takes_agents else fn(phi)
    except ValueError as exc:
        raise _CliError(str(exc)) from exc
    _emit({
        "rule": args.rule,
        "input": to_text(phi),
        "output": to_text(result.output),
        "output_length": length(result.output),
        "extension": result.extension.to_json_dict(),
        "guards": [to_text(g) for g in result.guard_set],
    }, args.pretty)
    return 0


def _cmd_sat(args) -> int:
    phi = _parse_formula(args.formula)
    verdict = bounded_sat(phi, max_states=args.max_states,
                          max_abilities=args.max_abilities,
                          similarity_only=args.similarity,
                          max_candidates=args.max_candidates)
    doc = {
        "status": verdict.status,
        "bounds": {"max_states": verdict.max_states,
                   "max_abilities": verdict.max_abilities},
        "candidates": verdict.candidates,
        "witness": None,
    }
    if verdict.witness is not None:
        model, state = verdict.witness
        doc["witness"] = {"state": state,
                          "model": json.loads(dump_model(model))}
    _emit(doc, args.pretty)
    return 0 if verdict.is_sat else 1


def _cmd_soundness(args) -> int:
    from .model import random_model
    from .satbench import _default_pools, instantiate_axioms
    if args.system not in SYSTEMS:
        raise _CliError(f"unknown system {args.system!r}; choose from "
                        f"{', '.join(sorted(SYSTEMS))}")
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("SIMKNO_SEED", "0"))
    models = []
    if args.include_fixture:
        models.append(fixture(args.include_fixture))
    models += [random_model(seed + i, max_states=args.max_states,
                            force_similarity=args.similarity)
               for i in range(args.models)]
    formulas, agents, groups = _default_pools(models)
    report = soundness_sweep(args.system, models, formulas=formulas,
                             agents=agents, groups=groups)
    by_key: dict = {}
    for v in report.violations:
        by_key.setdefault((v.schema, v.formulas), []).append(v)
    for inst in instantiate_axioms(args.system, formulas=formulas,
                                   agents=agents, groups=groups):
        key = (inst.schema, tuple(to_text(f) for f in inst.formulas))
        bad = by_key.get(key, [])
        _emit({"record": "instance", "schema": inst.schema,
               "formulas": list(key[1]), "ok": not bad}, False)
        for v in bad:
            _emit({"record": "violation", **v.to_json_dict()}, False)
    _emit({"record": "summary", "system": report.system,
           "instances": report.instances, "models": report.models,
           "checks": report.checks, "ok": report.ok}, False)
    return 0 if report.ok else 1


def _cmd_closure(args) -> int:
    phi = expand_everyone(_parse_formula(args.formula))
    members = sorted(closure(phi), key=lambda f: (length(f), to_text(f)))
    _emit({"formula": to_text(phi), "size": len(members),
           "closure": [to_text(f) for f in members]}, args.pretty)
    return 0


def _cmd_fixtures(args) -> int:
    if args.dir:
        names = [args.name] if args.name else list(FIXTURE_NAMES)
        os.makedirs(args.dir, exist_ok=True)
        written = []
        for name in names:
            path = os.path.join(args.dir, f"{name}.json")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(dump_model(fixture(name)))
            written.append(path)
        _emit({"written": written}, args.pretty)
    elif args.name:
        sys.stdout.write(dump_model(fixture(args.name)))
    else:
        _emit({"fixtures": list(FIXTURE_NAMES)}, args.pretty)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="simkno",
        description="Epistemic-ability models: check, translate, rewrite.")
    sub = top.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        p.add_argument("--pretty", action="store_true",
                       help="indent the JSON output")
        return p

    p = cmd("check", _cmd_check, "evaluate a formula at a state of a model")
    p.add_argument("model", help="model file (weighted or relational JSON)")
    p.add_argument("formula")
    p.add_argument("state")
    p.add_argument("--truthset", action="store_true",
                   help="also list every state satisfying the formula")

    p = cmd("validate", _cmd_validate,
            "classify a weighted model's labelling (exit 0 iff similarity)")
    p.add_argument("model")

    p = cmd("translate", _cmd_translate,
            "convert between weighted and relational models")
    p.add_argument("model")
    p.add_argument("--direction", required=True,
                   choices=("to-kripke", "from-kripke", "lift"))
    p.add_argument("-o", "--out", help="write the result here instead of stdout")

    p = cmd("rewrite", _cmd_rewrite, "apply a satisfiability-preserving rule")
    p.add_argument("formula")
    p.add_argument("--rule", required=True, choices=sorted(_RULES))
    p.add_argument("--agents",
                   help="declared agent universe for rho-t/rho-s/rho-m "
                        "(comma separated; default: the formula's agents)")

    p = cmd("sat", _cmd_sat, "bounded brute-force satisfiability")
    p.add_argument("formula")
    p.add_argument("--max-states", type=int, default=4)
    p.add_argument("--max-abilities", type=int, default=3)
    p.add_argument("--similarity", action="store_true",
                   help="search similarity models only")
    p.add_argument("--max-candidates", type=int, default=10_000_000)

    p = cmd("soundness", _cmd_soundness,
            "sweep one axiom system over sampled models (JSON lines)")
    p.add_argument("system", help="one of the sixteen systems, e.g. K, KBDM")
    p.add_argument("--models", type=int, default=100)
    p.add_argument("--max-states", type=int, default=4)
    p.add_argument("--seed", type=int, default=None,
                   help="sampler seed (default: SIMKNO_SEED or 0)")
    p.add_argument("--similarity", action="store_true",
                   help="sample similarity models only")
    p.add_argument("--include-fixture", choices=FIXTURE_NAMES,
                   help="prepend a bundled fixture to the sampled models")

    p = cmd("closure", _cmd_closure,
            "the finite closure set of a formula (E expanded first)")
    p.add_argument("formula")

    p = cmd("fixtures", _cmd_fixtures, "list or export the bundled models")
    p.add_argument("name", nargs="?", choices=FIXTURE_NAMES)
    p.add_argument("--dir", help="write fixture JSON files into this directory")

    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 2


if __name__ == "__main__":
    sys.exit(main())
