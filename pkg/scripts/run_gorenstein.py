"""
Command line front end: read category and representation files, run one
computation and write a deterministic JSON report.

Example usage:
    python -m scripts.run_gorenstein gdim data/fixtures/square.json --json
    python -m scripts.run_gorenstein check monic data/fixtures/a2_zero_map.json
    python -m scripts.run_gorenstein check gp data/fixtures/discrepancy_m_p2.json --cutoff 8
    python -m scripts.run_gorenstein enumerate data/fixtures/kA3.json --field F2 --dims 2 --check monic

Exit status is 0 for definite answers, 2 for answers blocked by the cutoff and
1 for input errors.
"""

import argparse
import glob
import json
import logging
import os
import sys
from dataclasses import dataclass, field as dataclass_field
from typing import List, Optional

from tqdm import tqdm

from .category import BaseChange, format_path
from .cmod import InconclusiveAtCutoffError, RightModule, ext_modules, is_finite, projective_resolution, tor_modules
from .formats import (FormatError, file_digest, file_kind, load_category, load_representation, render_report,
                      write_report)
from .gorenstein import (DEFAULT_ENUMERATION_LIMIT, INCONCLUSIVE, declared_profile, discrepancy_probe,
                         enumerate_representations, is_gp_functor, is_gproj_P, is_monic, lifted_class_membership,
                         self_injective_dimension, totally_acyclic_window)
from .linalg import Field
from .nakayama import AdjointTriple, gorenstein_dimension_of_P

logger = logging.getLogger(__name__)

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "fixtures")

CHECK_KINDS = ("gproj-p", "monic", "gp", "lifted", "discrepancy", "window")
COMMANDS = ("cat-info", "gdim", "resolve", "nakayama", "derived", "tor", "ext", "check", "profile-base",
            "enumerate", "fixtures")

DEFINITE, INPUT_ERROR, INCONCLUSIVE_STATUS = 0, 1, 2

TWO_INPUTS = ("tor", "ext")
FUNCTORS = ("nu", "nu_minus")


@dataclass
class RunConfig:
    command: str
    inputs: List[str] = dataclass_field(default_factory=list)
    kind: Optional[str] = None
    cutoff: int = 16
    limit: int = DEFAULT_ENUMERATION_LIMIT
    out: Optional[str] = None
    field: Optional[str] = None
    json: bool = False
    width: int = 2
    degree: int = 1
    functor: str = "nu"
    x_class: str = "gproj_P"
    f_class: str = "gp"
    base_g: Optional[int] = None
    dims: Optional[str] = None
    check: Optional[str] = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError("Unknown command {!r}".format(self.command))
        if self.cutoff < 1 or self.limit < 1 or self.width < 1:
            raise ValueError("cutoff, limit and width must be positive")
        if self.functor not in FUNCTORS:
            raise ValueError("Unknown functor {!r}, expected one of {}".format(self.functor, ", ".join(FUNCTORS)))
        if self.command == "check" and self.kind not in CHECK_KINDS:
            raise ValueError("Unknown check {!r}, expected one of {}".format(self.kind, ", ".join(CHECK_KINDS)))
        if self.command == "fixtures":
            if len(self.inputs) > 1:
                raise ValueError("fixtures takes at most one directory")
        else:
            expected = 2 if self.command in TWO_INPUTS else 1
            if len(self.inputs) != expected:
                raise ValueError("{} takes {} input file(s), got {}".format(self.command, expected, len(self.inputs)))
        for path in self.inputs:
            if not os.path.exists(path):
                raise FileNotFoundError("No such file: {}".format(path))

    def get_field(self):
        return Field.from_name(self.field) if self.field else None


def _dims_report(module):
    return dict(module.dims)


def _derived_report(table, degrees):
    values, blocked = {}, None
    for i in degrees:
        try:
            values[i] = table.dims(i)
        except InconclusiveAtCutoffError as error:
            blocked = error.degree
            break
    return values, blocked


def _gdim_report(dimension):
    return {
        "value": str(dimension.value),
        "status": dimension.status,
        "left": str(dimension.s1),
        "right": str(dimension.s2),
        "per_object": {c: {side: str(v) for side, v in values.items()} for c, values in dimension.per_object.items()},
    }


class GorensteinRunner:
    """Dispatches one RunConfig; every handler returns (status, result, inputs)."""

    def __init__(self, config):
        self.config = config
        self.field = config.get_field()

    def _category(self, path):
        return load_category(path, self.field), {os.path.basename(path): file_digest(path)}

    def _representation(self, path):
        return load_representation(path, self.field)

    def _profile(self, change):
        if self.config.base_g is not None:
            return declared_profile(change.base, self.config.base_g)
        return self_injective_dimension(change.base, self.config.cutoff)

    def run_cat_info(self):
        category, inputs = self._category(self.config.inputs[0])
        table = {"{}->{}".format(x, y): d for (x, y), d in category.hom_dimension_table().items()}
        bases = {"{}->{}".format(x, y): [format_path(w, x) for w in words] for (x, y), words in category.basis.items()}
        result = {
            "name": category.name,
            "field": category.field.name,
            "objects": list(category.objects),
            "total_dim": category.total_dim(),
            "hom_dims": table,
            "hom_bases": bases,
            "associativity_failure": category.check_associativity(),
            "failing_relations": [str(r) for r in category.check_relations()],
        }
        return DEFINITE, result, inputs

    def run_gdim(self):
        category, inputs = self._category(self.config.inputs[0])
        dimension = gorenstein_dimension_of_P(category, self.config.cutoff)
        status = DEFINITE if dimension.is_finite else INCONCLUSIVE_STATUS
        return status, _gdim_report(dimension), inputs

    def run_profile_base(self):
        category, inputs = self._category(self.config.inputs[0])
        profile = self_injective_dimension(category, self.config.cutoff)
        status = DEFINITE if profile.is_finite else INCONCLUSIVE_STATUS
        return status, profile.to_dict(), inputs

    def run_resolve(self):
        loaded = self._representation(self.config.inputs[0])
        resolution = projective_resolution(loaded.module, self.config.cutoff)
        result = {
            "summands": resolution.summands(),
            "syzygy_dims": [_dims_report(K) for K in resolution.syzygies],
            "pdim": str(resolution.pdim()),
            "completed": resolution.completed,
        }
        status = DEFINITE if is_finite(resolution.pdim()) else INCONCLUSIVE_STATUS
        return status, result, loaded.inputs

    def run_nakayama(self):
        loaded = self._representation(self.config.inputs[0])
        triple = AdjointTriple(loaded.change)
        minus = self.config.functor == "nu_minus"
        module = triple.nu_minus(loaded.module) if minus else triple.nu(loaded.module)
        return DEFINITE, {"functor": self.config.functor, "dims": _dims_report(module)}, \
            loaded.inputs

    def run_derived(self):
        loaded = self._representation(self.config.inputs[0])
        triple = AdjointTriple(loaded.change)
        if self.config.functor == "nu_minus":
            table = triple.right_derived(loaded.module, self.config.cutoff)
        else:
            table = triple.left_derived(loaded.module, self.config.cutoff)
        values, blocked = _derived_report(table, range(1, self.config.degree + 1))
        result = {"functor": self.config.functor, "dims": values, "blocked_at": blocked,
                  "vanishes_above": table.vanishes_above}
        return (INCONCLUSIVE_STATUS if blocked else DEFINITE), result, loaded.inputs

    def _two_modules(self, side):
        first = self._representation(self.config.inputs[0])
        second = self._representation(self.config.inputs[1])
        if not first.change.trivial:
            raise FormatError("{}: the first argument of {} must not declare a base".format(
                first.path, self.config.command))
        if isinstance(first.module, RightModule) != (side == "right"):
            raise FormatError("{}: {} needs a {} module as first argument".format(
                first.path, self.config.command, side))
        category = first.module.category
        if category != second.change.category:
            raise FormatError("{}: the first argument lives over {}, the second over {}".format(
                first.path, category.name, second.change.category.name))
        inputs = dict(first.inputs)
        inputs.update(second.inputs)
        return first, second, inputs

    def run_tor(self):
        first, second, inputs = self._two_modules("right")
        table = tor_modules(first.module, second.module, self.config.cutoff, second.change)
        values, blocked = _derived_report(table, range(0, self.config.degree + 1))
        return (INCONCLUSIVE_STATUS if blocked is not None else DEFINITE), \
            {"Tor": values, "blocked_at": blocked}, inputs

    def run_ext(self):
        first, second, inputs = self._two_modules("left")
        table = ext_modules(first.module, second.module, self.config.cutoff, second.change)
        values, blocked = _derived_report(table, range(0, self.config.degree + 1))
        return (INCONCLUSIVE_STATUS if blocked is not None else DEFINITE), \
            {"Ext": values, "blocked_at": blocked}, inputs

    def run_check(self):
        kind, cutoff = self.config.kind, self.config.cutoff
        loaded = self._representation(self.config.inputs[0])
        F, change = loaded.module, loaded.change
        if kind == "monic":
            verdict = is_monic(F, change)
        elif kind == "gproj-p":
            verdict = is_gproj_P(F, AdjointTriple(change), cutoff)
        elif kind == "gp":
            verdict = is_gp_functor(F, AdjointTriple(change), self._profile(change), cutoff)
        elif kind == "lifted":
            verdict = lifted_class_membership(F, AdjointTriple(change), self.config.x_class, self.config.f_class,
                                              self._profile(change), cutoff)
        elif kind == "window":
            verdict = totally_acyclic_window(F, self.config.width)
        else:
            probe = discrepancy_probe(F, change, cutoff)
            members = (probe.first.member, probe.second.member)
            status = INCONCLUSIVE_STATUS if INCONCLUSIVE in members else DEFINITE
            return status, probe.to_dict(), loaded.inputs
        status = INCONCLUSIVE_STATUS if verdict.member == INCONCLUSIVE else DEFINITE
        return status, verdict.to_dict(), loaded.inputs

    def _dim_bound(self, category):
        if not self.config.dims:
            return 1
        values = [int(v) for v in self.config.dims.split(",")]
        if len(values) == 1:
            return values[0]
        if len(values) != len(category.objects):
            raise ValueError("--dims needs one bound or one per object ({})".format(len(category.objects)))
        return values

    def run_enumerate(self):
        category, inputs = self._category(self.config.inputs[0])
        triple = AdjointTriple(BaseChange(category))
        counts = {"total": 0, "yes": 0, "no": 0, "inconclusive": 0}
        representations = enumerate_representations(category, self._dim_bound(category), self.config.limit)
        for representation in tqdm(representations, desc="Enumerating", disable=not self.config.check):
            counts["total"] += 1
            if self.config.check == "monic":
                counts[is_monic(representation, triple.change).member] += 1
            elif self.config.check == "gproj-p":
                counts[is_gproj_P(representation, triple, self.config.cutoff).member] += 1
        if not self.config.check:
            counts = {"total": counts["total"]}
        status = INCONCLUSIVE_STATUS if counts.get("inconclusive") else DEFINITE
        return status, {"check": self.config.check, "counts": counts}, inputs

    def run_fixtures(self):
        directory = self.config.inputs[0] if self.config.inputs else FIXTURE_DIR
        paths = sorted(glob.glob(os.path.join(directory, "*.json")))
        result, inputs = {}, {}
        for path in tqdm(paths, desc="Fixtures"):
            name = os.path.basename(path)
            inputs[name] = file_digest(path)
            if file_kind(path) == "category":
                category = load_category(path, self.field)
                result[name] = {"kind": "category", "objects": len(category.objects),
                                "total_dim": category.total_dim()}
            else:
                loaded = load_representation(path, self.field)
                result[name] = {"kind": "representation", "dims": _dims_report(loaded.module)}
        return DEFINITE, {"fixtures": result, "count": len(paths)}, inputs

    def run(self):
        handler = getattr(self, "run_" + self.config.command.replace("-", "_"))
        return handler()


def run(config):
    """Run one command; returns (exit status, report text)."""
    config.validate()
    status, result, inputs = GorensteinRunner(config).run()
    command = config.command if config.kind is None else "{} {}".format(config.command, config.kind)
    return status, render_report(command, inputs, config.cutoff, result)


def _summary(text):
    report = json.loads(text)
    result = report["result"]
    lines = ["{}".format(report["command"])]
    for key in ("member", "value", "status", "pdim", "dims", "counts", "count"):
        if key in result:
            lines.append("  {}: {}".format(key, result[key]))
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("arguments", nargs="*",
                        help="For check: the kind followed by the representation file; otherwise input files.")
    parser.add_argument("--cutoff", default=16, type=int, help="Number of resolution stages to compute.")
    parser.add_argument("--field", default=None, type=str, help="Override the field of every input: Q or F<p>.")
    parser.add_argument("--out", default=None, type=str, help="Write the JSON report to this path.")
    parser.add_argument("--json", action="store_true", help="Print the full JSON report.")
    parser.add_argument("--limit", default=DEFAULT_ENUMERATION_LIMIT, type=int,
                        help="Largest raw search space accepted by enumerate.")
    parser.add_argument("--width", default=2, type=int, help="Width of a totally acyclic window.")
    parser.add_argument("--degree", default=1, type=int, help="Highest degree for derived, tor and ext.")
    parser.add_argument("--functor", default="nu", choices=FUNCTORS, help="nu or its right adjoint nu_minus.")
    parser.add_argument("--x", dest="x_class", default="gproj_P", choices=("gproj_P", "P_proj"))
    parser.add_argument("--f", dest="f_class", default="gp", choices=("gp", "proj"))
    parser.add_argument("--base-g", dest="base_g", default=None, type=int,
                        help="Declared self-injective dimension of the base.")
    parser.add_argument("--dims", default=None, type=str, help="Dimension bound for enumerate, e.g. 2 or 1,2,1.")
    parser.add_argument("--check", default=None, choices=("monic", "gproj-p"), help="Check run by enumerate.")
    args = parser.parse_args()

    logging.basicConfig(format='%(asctime)s - %(levelname)s - %(name)s -   %(message)s',
                        datefmt='%m/%d/%Y %H:%M:%S',
                        level=logging.INFO)

    kind, inputs = None, list(args.arguments)
    if args.command == "check":
        if not inputs:
            parser.error("check needs a kind")
        kind, inputs = inputs[0], inputs[1:]
    config = RunConfig(command=args.command, inputs=inputs, kind=kind, cutoff=args.cutoff, limit=args.limit,
                       out=args.out, field=args.field, json=args.json, width=args.width, degree=args.degree,
                       functor=args.functor, x_class=args.x_class, f_class=args.f_class, base_g=args.base_g,
                       dims=args.dims, check=args.check)
    try:
        status, text = run(config)
    except (ValueError, OSError) as error:
        logger.error("%s", error)
        sys.exit(INPUT_ERROR)
    if config.out:
        write_report(text, config.out)
    if config.json or not config.out:
        write_report(text if config.json else _summary(text))
    sys.exit(status)


if __name__ == "__main__":
    main()
