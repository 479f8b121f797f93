"""Command line interface.

Subcommands mirror the report operations: og10-sha, bm-sha, twist-gen,
lattice-check, lambda-cohomology, deligne-ss, fujiki-check.  Every
subcommand prints a human-readable table by default and machine JSON with
--json.  Exit codes: 0 all checks pass, 2 check failures, 1 input errors.
"""

from __future__ import annotations

import json
import random
import sys
from fractions import Fraction

import click

from .analytic import BudgetMismatch, deligne_leray_scenario
from .fujiki import (
    bbf_roundtrip,
    fujiki_constant,
    intersection_number,
    matching_sum,
    og10_setup,
    permutation_sum,
)
from .lattices import pairing
from .report import (
    BMInput,
    CubicInput,
    bm_sha_report,
    degree_twist_generator,
    og10_lattice_check,
    og10_sha_report,
)
from .sectionring import build_ring, cubic_preset, k3_preset, lambda_cohomology
from .serialize import (
    ConfigError,
    analytic_to_json,
    brauer_to_json,
    group_to_json,
    load_k3_datum,
    page_to_json,
    render_page,
    _read_config,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CHECK = 2


def _fail_input(message):
    click.echo(f"input error: {message}", err=True)
    sys.exit(EXIT_INPUT)


def _load_cubic(config_path) -> CubicInput:
    try:
        datum, vectors, config = load_k3_datum(config_path, weight_index=2)
        h2 = vectors.get("h2")
        if h2 is None:
            raise ConfigError("config must provide vectors.h2")
        sigma = tuple(tuple(int(x) for x in v) for v in config.get("sigma", []))
        defect_general = bool(config.get("defect_general", not sigma))
        return CubicInput(datum, h2, sigma, defect_general)
    except (ConfigError, ValueError, OSError, json.JSONDecodeError) as exc:
        _fail_input(exc)


def _load_bm(config_path) -> BMInput:
    try:
        datum, vectors, config = load_k3_datum(config_path, weight_index=1)
        pol = vectors.get("L") or vectors.get("c1")
        if pol is None:
            raise ConfigError("config must provide vectors.L (or vectors.c1)")
        genus = config.get("genus") or config.get("g")
        if genus is None:
            square = pairing(datum.lattice, pol, pol)
            genus = square // 2 + 1
        return BMInput(datum, pol, int(genus))
    except (ConfigError, ValueError, OSError, json.JSONDecodeError) as exc:
        _fail_input(exc)


@click.group()
def main():
    """Exact lattice and cohomology reports for Lagrangian fibration twists."""


@main.command("og10-sha")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def og10_sha(config_path, as_json):
    """Sections, Sha structure, and lattice checks for a cubic datum."""
    cubic = _load_cubic(config_path)
    report = og10_sha_report(cubic)
    payload = {
        "d": report.d,
        "h0_J_rank": report.h0_J,
        "h0_Jtilde_rank": report.h0_Jtilde,
        "h1_Jtilde": brauer_to_json(report.h1_Jtilde),
        "first_term": group_to_json(report.first_term),
        "sha0": {
            "first_term": group_to_json(report.sha0.first_term),
            "group": brauer_to_json(report.sha0.sha_group),
            "target": brauer_to_json(report.sha0.target),
            "injective": report.sha0.injective,
        },
        "mw_rank": report.mw_rank,
        "twist_generator": None if report.twist_generator is None else {
            "order": report.twist_generator.order,
            "residue_mod_3": list(report.twist_generator.residue),
        },
        "higher": {str(k): {"J_rank": v.j_even.free_rank,
                            "Jtilde_rank": v.jtilde_even_rank}
                   for k, v in report.higher.items()},
        "lattice_checks": {name: ok for name, ok, _ in report.og10_checks.checks},
    }
    ok = report.og10_checks.passed()
    if as_json:
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(f"degree-twist order d          : {report.d}")
        click.echo(f"sections rank  H0(J)          : {report.h0_J}")
        click.echo(f"sections rank  H0(J~)         : {report.h0_Jtilde}")
        click.echo(f"H1(J~) = Brauer quotient      : {report.h1_Jtilde}")
        click.echo(f"first term of the Sha sequence: {report.first_term}")
        click.echo(f"Sha0 group                    : {report.sha0.sha_group}")
        click.echo(f"first map injective           : {report.sha0.injective}")
        click.echo(f"Mordell-Weil rank lower bound : {report.mw_rank}")
        if report.twist_generator is not None:
            click.echo(f"twist generator order         : {report.twist_generator.order}")
        for k, v in report.higher.items():
            click.echo(f"H^{2 * k}(B,J) rank {v.j_even.free_rank:>3}   "
                       f"H^{2 * k}(B,J~) rank {v.jtilde_even_rank:>3}")
        click.echo("lattice checks                : "
                   + ("all pass" if ok else f"FAIL {report.og10_checks.failures()}"))
    sys.exit(EXIT_OK if ok else EXIT_CHECK)


@main.command("bm-sha")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def bm_sha(config_path, as_json):
    """Beauville-Mukai analog report for a polarized K3 datum."""
    bm = _load_bm(config_path)
    report = bm_sha_report(bm)
    payload = {
        "d": report.d,
        "first_term": group_to_json(report.first_term),
        "h1_Jtilde": brauer_to_json(report.h1_Jtilde),
        "injective": report.sha0.injective,
        "h0_J_rank": report.h0_J,
        "h0_Jtilde_rank": report.h0_Jtilde,
        "lambda": {str(k): group_to_json(v) for k, v in report.lambda_table.items()},
    }
    if as_json:
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(f"divisibility d       : {report.d}")
        click.echo(f"first term           : {report.first_term}")
        click.echo(f"Brauer quotient      : {report.h1_Jtilde}")
        click.echo(f"first map injective  : {report.sha0.injective}")
        for k, v in sorted(report.lambda_table.items()):
            click.echo(f"H^{k}(Lambda-model) : {v}")
    sys.exit(EXIT_OK)


@main.command("twist-gen")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def twist_gen(config_path, as_json):
    """The degree-twist generator class and its order."""
    cubic = _load_cubic(config_path)
    try:
        twist = degree_twist_generator(cubic)
    except ValueError as exc:
        _fail_input(exc)
    payload = {
        "order": twist.order,
        "residue_mod_3": list(twist.residue),
        "integral_class": list(twist.ambient_class),
    }
    if as_json:
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(f"order          : {twist.order}")
        click.echo(f"residue mod 3  : {list(twist.residue)}")
        click.echo(f"integral class : {list(twist.ambient_class)}")
    sys.exit(EXIT_OK)


@main.command("lattice-check")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def lattice_check(config_path, as_json):
    """Rank/determinant/pairing assertions for the derived rank-24 lattice."""
    cubic = _load_cubic(config_path)
    record = og10_lattice_check(cubic)
    payload = {name: {"pass": ok, "detail": detail}
               for name, ok, detail in record.checks}
    if as_json:
        click.echo(json.dumps(payload, indent=2))
    else:
        for name, ok, detail in record.checks:
            click.echo(f"{'PASS' if ok else 'FAIL'}  {name:<36} {detail}")
    sys.exit(EXIT_OK if record.passed() else EXIT_CHECK)


@main.command("lambda-cohomology")
@click.option("--kind", type=click.Choice(["cubic", "k3"]), default="cubic")
@click.option("--g", "genus", type=int, default=2, show_default=True,
              help="genus for the k3 preset")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="optional lattice config overriding the default preset")
@click.option("--json", "as_json", is_flag=True)
def lambda_cohomology_cmd(kind, genus, config_path, as_json):
    """Cohomology table of the middle direct-image complex."""
    try:
        if kind == "cubic":
            if config_path:
                datum, vectors, _ = load_k3_datum(config_path, weight_index=2)
                preset = cubic_preset(datum.lattice, vectors.get("h2"))
            else:
                preset = cubic_preset()
        else:
            if config_path:
                datum, vectors, config = load_k3_datum(config_path, weight_index=1)
                pol = vectors.get("L") or vectors.get("c1")
                preset = k3_preset(int(config.get("g", genus)), datum.lattice, pol)
            else:
                preset = k3_preset(genus)
    except (ConfigError, ValueError, OSError) as exc:
        _fail_input(exc)
    ring = build_ring(preset)
    table = {k: lambda_cohomology(ring, k) for k in range(2 * ring.N)}
    if as_json:
        click.echo(json.dumps({str(k): group_to_json(v) for k, v in table.items()},
                              indent=2))
    else:
        for k, v in table.items():
            click.echo(f"k={k:<2}  {v}")
    sys.exit(EXIT_OK)


@main.command("deligne-ss")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def deligne_ss(config_path, as_json):
    """Direct-image spectral sequence pages for the twisted Deligne complex."""
    cubic = _load_cubic(config_path)
    try:
        report = deligne_leray_scenario(cubic.hodge, cubic.h2)
    except BudgetMismatch as exc:
        click.echo(f"check failure: {exc}", err=True)
        sys.exit(EXIT_CHECK)
    if as_json:
        payload = {
            "e2": page_to_json(report.e2),
            "e3": page_to_json(report.e3),
            "h0_rank": report.h0_rank,
            "h1_corank": report.h1_corank,
            "degree_totals": {str(k): analytic_to_json(v)
                              for k, v in report.degree_totals.items()},
            "degree6_rank": report.degree6_rank,
            "declarations": [{"location": list(loc), "page": page, "note": note}
                             for loc, page, note in report.declarations],
        }
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(render_page(report.e2))
        click.echo("")
        click.echo(render_page(report.e3))
        click.echo("")
        click.echo(f"H0(B,J~) rank   : {report.h0_rank}")
        click.echo(f"H1(B,J~) corank : {report.h1_corank}")
        click.echo(f"degree-6 total  : {report.degree6_rank}")
    sys.exit(EXIT_OK)


@main.command("fujiki-check")
@click.option("--family", type=click.Choice(["og10", "k3_hilb"]), default="og10",
              show_default=True)
@click.option("--n", "half_dim", type=int, default=5, show_default=True)
@click.option("--vectors", "vectors_path", type=click.Path(exists=True), default=None,
              help="JSON file with either 2n 'vectors' or u/v/theta/eta")
@click.option("--json", "as_json", is_flag=True)
def fujiki_check(family, half_dim, vectors_path, as_json):
    """Fujiki relation and BBF round-trip checks, exact rational arithmetic."""
    from .fujiki import BadFamilyDimension, OddCount, PreconditionViolated

    try:
        constant = fujiki_constant(family, half_dim)
    except BadFamilyDimension as exc:
        _fail_input(exc)
    setup = og10_setup() if family == "og10" else None
    results = {"family": family, "n": half_dim, "fujiki_constant": str(constant)}
    failures = []

    if vectors_path:
        if setup is None:
            _fail_input("vector checks need the og10 family setup")
        data = _read_config(vectors_path)
        if "vectors" in data:
            vecs = [tuple(int(x) for x in v) for v in data["vectors"]]
            try:
                msum = matching_sum(vecs, setup.lattice)
                integral = intersection_number(setup, vecs)
            except OddCount as exc:
                _fail_input(exc)
            results["matching_sum"] = str(msum)
            results["intersection_number"] = str(integral)
        if all(k in data for k in ("u", "v", "theta", "eta")):
            u, v = tuple(data["u"]), tuple(data["v"])
            theta, eta = tuple(data["theta"]), tuple(data["eta"])
            try:
                value = bbf_roundtrip(setup, u, v, theta, eta)
            except PreconditionViolated as exc:
                _fail_input(exc)
            expected = pairing(setup.lattice, u, v)
            results["bbf_roundtrip"] = str(value)
            results["gram_value"] = str(expected)
            if value != expected:
                failures.append("bbf_roundtrip")
    else:
        rng = random.Random(20240810)
        lat = og10_setup().lattice
        setup = og10_setup()
        theta = (1,) + (0,) * 23
        eta = (0, 1) + (0,) * 22
        for trial in range(5):
            u = (0, 0) + tuple(rng.randint(-3, 3) for _ in range(22))
            v = (0, 0) + tuple(rng.randint(-3, 3) for _ in range(22))
            if bbf_roundtrip(setup, u, v, theta, eta) != pairing(lat, u, v):
                failures.append(f"roundtrip_trial_{trial}")
        u = tuple(rng.randint(-2, 2) for _ in range(24))
        want = setup.fujiki_constant * Fraction(pairing(lat, u, u)) ** 5
        if intersection_number(setup, [u] * 10) != want:
            failures.append("fujiki_power_identity")
        from .lattices import standard_lattice
        small = standard_lattice("U")
        for n in (1, 2, 3):
            vecs = [tuple(rng.randint(-2, 2) for _ in range(2)) for _ in range(2 * n)]
            lhs = permutation_sum(vecs, small)
            rhs = 2 ** n * __import__("math").factorial(n) * matching_sum(vecs, small)
            if lhs != rhs:
                failures.append(f"permutation_vs_matching_n{n}")
        results["built_in_suite"] = "ran 5 roundtrips, 1 power identity, 3 oracle sizes"

    results["failures"] = failures
    if as_json:
        click.echo(json.dumps(results, indent=2))
    else:
        for key, value in results.items():
            click.echo(f"{key}: {value}")
    sys.exit(EXIT_OK if not failures else EXIT_CHECK)


if __name__ == "__main__":
    main()
