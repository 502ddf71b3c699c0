"""Command-line front end.

Subcommands::

    link-budget       FSO loss curves (baseline + one series per aperture)
    fock-decay        purity/entropy sweep of the binomial fiber decay
    audit-chsh        three-pipeline loss-model comparison table
    channel-validate  completeness report for a built-in channel
    state-metrics     purity/entropy/CHSH of a built-in state

Tabular commands emit CSV (default) or JSON via ``--format``; the two
inspection commands emit JSON only. Output goes to stdout or, with
``--output``, to a file written atomically (temp file + rename). All
output is deterministic: identical flags produce byte-identical bytes.

Units are SI meters, except attenuation coefficients (dB/km, the
domain-conventional unit) and fiber lengths (km, to match dB/km).
Exit status: 0 success, 2 flag/usage error, 1 computation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import audit, channels, lossmodels, metrics, states

_FMT = "%.9g"


def _fmt(value: float) -> str:
    return _FMT % value


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _nonnegative(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {text}")
    return value


def _eta_open_unit(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1], got {text}")
    return value


def _photon_count(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 15:
        raise argparse.ArgumentTypeError(
            f"photon number must be in 1..15 (entropy needs the small-dimension "
            f"eigensolver), got {text}"
        )
    return value


def _emit(text: str, output: str | None) -> None:
    """Write to stdout, or atomically to ``output``."""
    if output is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(output))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".qloss-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_path, output)
    except BaseException:
        os.unlink(tmp_path)
        raise


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(header: str, rows: list[list[str]]) -> str:
    return "\n".join([header] + [",".join(row) for row in rows]) + "\n"


# ---------------------------------------------------------------- link-budget


def _run_link_budget(args) -> str:
    series: list[tuple[str, float | None]] = [("baseline", None)]
    apertures = args.aperture if args.aperture else [0.2, 0.5]
    series += [("aperture_%g" % a, a) for a in apertures]
    if args.step > args.zmax:
        args.parser.error(f"--step {args.step} exceeds --zmax {args.zmax}")

    tables: list[tuple[str, list[lossmodels.LinkBudgetPoint]]] = []
    for name, aperture in series:
        params = lossmodels.FsoParams(
            alpha=args.alpha,
            wavelength=args.wavelength,
            waist=args.waist,
            aperture_radius=aperture if aperture is not None else 1.0,
        )
        curve = lossmodels.link_budget_curve(
            params,
            z_max=args.zmax,
            step=args.step,
            include_geo=aperture is not None,
            literal_exponent=args.literal_exponent,
        )
        tables.append((name, curve))

    if args.format == "json":
        return _json_text(
            [
                {
                    "series": name,
                    "points": [
                        {
                            "z_m": pt.z,
                            "atm_T": pt.atm_transmittance,
                            "geo_eta": pt.geo_efficiency,
                            "loss_db": pt.total_loss_db,
                        }
                        for pt in curve
                    ],
                }
                for name, curve in tables
            ]
        )
    rows = [
        [name, _fmt(pt.z), _fmt(pt.atm_transmittance), _fmt(pt.geo_efficiency), _fmt(pt.total_loss_db)]
        for name, curve in tables
        for pt in curve
    ]
    return _csv_text("series," + lossmodels.CURVE_CSV_HEADER, rows)


# ----------------------------------------------------------------- fock-decay


def _run_fock_decay(args) -> str:
    if args.step > args.lmax:
        args.parser.error(f"--step {args.step} exceeds --lmax {args.lmax}")
    lengths = []
    k = 0
    while True:
        length = k * args.step
        if length >= args.lmax - 1e-9 * args.step:
            break
        lengths.append(length)
        k += 1
    lengths.append(args.lmax)

    records = []
    for length in lengths:
        rho = lossmodels.fock_decay_state(
            lossmodels.FiberParams(
                alpha=args.alpha, length=length, n_photons=args.photons
            )
        )
        records.append(
            (length, metrics.purity(rho), metrics.von_neumann_entropy(rho))
        )

    if args.format == "json":
        return _json_text(
            [
                {"L_km": length, "purity": pur, "entropy_bits": ent}
                for length, pur, ent in records
            ]
        )
    rows = [[_fmt(length), _fmt(pur), _fmt(ent)] for length, pur, ent in records]
    return _csv_text("L_km,purity,entropy_bits", rows)


# ----------------------------------------------------------------- audit-chsh


def _run_audit_chsh(args) -> str:
    grid = args.eta if args.eta else [round(0.05 * k, 10) for k in range(1, 21)]
    if args.format == "json":
        return _json_text(audit.full_reports(grid))
    columns = audit.AUDIT_CSV_HEADER.split(",")
    rows = [[_fmt(row[col]) for col in columns] for row in audit.compare_report(grid)]
    return _csv_text(audit.AUDIT_CSV_HEADER, rows)


# ----------------------------------------------- channel-validate / metrics


def _build_channel(args) -> channels.KrausChannel:
    name = args.channel
    if name == "identity":
        if not 1 <= args.dim <= 4096:
            args.parser.error(f"--dim must be in 1..4096, got {args.dim}")
        return channels.identity_channel(args.dim)
    if args.param is None:
        args.parser.error(f"--channel {name} requires --param")
    if name == "loss":
        return channels.loss_channel(args.param)
    if name == "depolarizing":
        return channels.depolarizing_channel(args.param)
    return channels.polarized_photon_loss_channel(args.param)


def _run_channel_validate(args) -> str:
    channel = _build_channel(args)
    report = channels.validate_cptp(channel, tol=args.tol)
    payload = {"channel": args.channel, "param": args.param}
    payload.update(channel.to_json_dict())
    payload["report"] = report.to_json_dict()
    return _json_text(payload)


_BELL_FLAGS = {
    "phi-plus": "phi_plus",
    "phi-minus": "phi_minus",
    "psi-plus": "psi_plus",
    "psi-minus": "psi_minus",
}


def _build_state(args) -> states.DensityMatrix:
    name = args.state
    if name in _BELL_FLAGS:
        return states.bell_state(_BELL_FLAGS[name])
    if name == "fock0":
        return states.fock_state(0)
    if name == "fock1":
        return states.fock_state(1)
    if name == "mixed2":
        return states.maximally_mixed((2,))
    if name == "mixed4":
        return states.maximally_mixed((2, 2))
    if args.param is None:
        args.parser.error("--state werner requires --param (the Bell weight)")
    return states.werner_state(args.param)


def _run_state_metrics(args) -> str:
    rho = _build_state(args)
    chsh = metrics.chsh_max(rho) if rho.dims == (2, 2) else None
    return _json_text(
        {
            "state": args.state,
            "dims": list(rho.dims),
            "purity": metrics.purity(rho),
            "entropy_bits": metrics.von_neumann_entropy(rho),
            "chsh_max": chsh,
        }
    )


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qloss",
        description="Lossy-channel simulation: link budgets, Fock decay, "
        "channel validation, and the loss-model audit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p, formats=("csv", "json")):
        p.add_argument("--output", help="write to this path (atomic) instead of stdout")
        if formats:
            p.add_argument("--format", choices=formats, default=formats[0])

    lb = sub.add_parser(
        "link-budget", help="FSO loss curves: baseline plus one series per aperture"
    )
    lb.add_argument("--alpha", type=_nonnegative, default=0.07, help="attenuation, dB/km")
    lb.add_argument("--wavelength", type=_positive, default=1.55e-6, help="meters")
    lb.add_argument("--waist", type=_positive, default=0.01, help="beam waist w0, meters")
    lb.add_argument(
        "--aperture",
        type=_positive,
        action="append",
        help="receiver aperture radius in meters; repeatable (default 0.2 and 0.5)",
    )
    lb.add_argument("--zmax", type=_positive, default=50000.0, help="meters")
    lb.add_argument("--step", type=_positive, default=100.0, help="meters")
    lb.add_argument(
        "--literal-exponent",
        action="store_true",
        help="use 10^(-alpha z) instead of the dB-consistent 10^(-alpha z / 10)",
    )
    add_output_flags(lb)
    lb.set_defaults(handler=_run_link_budget, parser=lb)

    fd = sub.add_parser(
        "fock-decay", help="purity/entropy of the binomial photon-number decay"
    )
    fd.add_argument("--alpha", type=_nonnegative, default=0.07, help="attenuation, dB/km")
    fd.add_argument("--photons", type=_photon_count, default=1, help="initial Fock number N")
    fd.add_argument("--lmax", type=_positive, default=100.0, help="km")
    fd.add_argument("--step", type=_positive, default=0.1, help="km")
    add_output_flags(fd)
    fd.set_defaults(handler=_run_fock_decay, parser=fd)

    ac = sub.add_parser(
        "audit-chsh", help="compare the three loss pipelines over a transmittance grid"
    )
    ac.add_argument(
        "--eta",
        type=_eta_open_unit,
        action="append",
        help="transmittance in (0, 1]; repeatable (default: 0.05 .. 1.0 in 20 steps)",
    )
    add_output_flags(ac)
    ac.set_defaults(handler=_run_audit_chsh, parser=ac)

    cv = sub.add_parser("channel-validate", help="completeness report for a channel")
    cv.add_argument(
        "--channel",
        required=True,
        choices=("loss", "depolarizing", "polarized-loss", "identity"),
    )
    cv.add_argument("--param", type=_unit_interval, help="channel parameter in [0, 1]")
    cv.add_argument("--dim", type=int, default=2, help="dimension for identity")
    cv.add_argument("--tol", type=_positive, default=channels.CPTP_TOL)
    add_output_flags(cv, formats=None)
    cv.set_defaults(handler=_run_channel_validate, parser=cv)

    sm = sub.add_parser("state-metrics", help="purity/entropy/CHSH of a built-in state")
    sm.add_argument(
        "--state",
        required=True,
        choices=tuple(_BELL_FLAGS) + ("fock0", "fock1", "mixed2", "mixed4", "werner"),
    )
    sm.add_argument("--param", type=_unit_interval, help="Bell weight for werner")
    add_output_flags(sm, formats=None)
    sm.set_defaults(handler=_run_state_metrics, parser=sm)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.handler(args)
        _emit(text, args.output)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
