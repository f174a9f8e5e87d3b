"""
CLI Interface for gaussqkd.
Entry point for command-line operations.
"""
import functools
import logging
import math
from typing import Any, Dict, Sequence

import click
import numpy as np
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from cad.distillation import blocks_needed, cad_error, simulate_cad
from classical_crypto.bb84 import WORKED_EXAMPLE, bb84_from_choices, bb84_run
from classical_crypto.ekert import chsh_value_exact, classical_chsh_bound, ekert91_run
from classical_crypto.rsa import rsa_decrypt, rsa_encrypt, rsa_keygen
from classical_crypto.transcript import QubitProtocolRun
from classical_crypto.vernam import BitString, vernam
from efficiency.integrator import efficiency
from efficiency.sweep import default_grid, load_grid_csv, sweep, write_sweep
from entanglement.bipartite import log_negativity, ppt_spectrum, to_standard_form
from error_handling.handler import ErrorHandler
from gaussian_core.state import validate_state
from output.generator import OutputGenerator, to_csv, to_json
from qkd_protocol.protocol import error_rate, eve_overlap
from qkd_protocol.security import Attack, accept_interval, security_check, security_margin
from qkd_protocol.states import MeasurementModel, SymmetricStdState
from run_config.settings import SEED_ENV, RunConfig, load_settings

load_dotenv()

console = Console()
err_console = Console(stderr=True)

CONTEXT_SETTINGS = dict(help_option_names=['-h', '--help'])
FORMATS = ["text", "json", "csv"]


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def handle_errors(func):
    """Translate library errors into a one-line reason and the documented exit code."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except Exception as error:
            code = ErrorHandler(console=err_console).handle(error)
        raise SystemExit(code)
    return wrapper


def format_option(func):
    return click.option("--format", "output_format", type=click.Choice(FORMATS), default="text",
                        show_default=True, help="Report format")(func)


def state_options(func):
    func = click.option("--cp", "c_p", type=float, required=True, help="Momentum correlation c_p")(func)
    func = click.option("--cx", "c_x", type=float, required=True, help="Position correlation c_x")(func)
    func = click.option("--lambda", "lam", type=float, required=True, help="Local variance lambda")(func)
    return func


def seed_option(func):
    return click.option("--seed", type=int, envvar=SEED_ENV, default=None,
                        help=f"Root seed (falls back to ${SEED_ENV}, then the config file)")(func)


def golden_option(help_text: str):
    """Self-test flag; --check-paper is accepted as an alias."""
    return click.option("--check-golden", "--check-paper", "check_golden", is_flag=True, help=help_text)


def _run_config(ctx: click.Context, output_format: str, **overrides: Any) -> RunConfig:
    settings = load_settings(ctx.obj.get("config"), overrides)
    return RunConfig(settings=settings, output_format=output_format, verbose=ctx.obj.get("verbose", False))


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, (list, tuple)):
        return " ".join(_cell(v) for v in value)
    return str(value)


def _emit(report: Dict[str, Any], output_format: str, title: str) -> None:
    """Print a flat report as an aligned table, JSON or key,value CSV."""
    if output_format == "json":
        click.echo(to_json(_json_safe(report)))
    elif output_format == "csv":
        click.echo(to_csv(["key", "value"], [[k, _cell(v)] for k, v in report.items()]), nl=False)
    else:
        table = Table(title=title, show_header=False)
        table.add_column("quantity", style="bold")
        table.add_column("value")
        for key, value in report.items():
            table.add_row(key, _cell(value))
        console.print(table)


def _golden(checks: Sequence[tuple]) -> None:
    """Print each (name, passed) row and exit 1 unless all pass."""
    failed = 0
    for name, passed in checks:
        mark = "[green]PASS[/green]" if passed else "[red]FAIL[/red]"
        console.print(f"{mark} {name}", highlight=False)
        failed += 0 if passed else 1
    if failed:
        raise SystemExit(1)


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option(version='0.1.0', prog_name='gaussqkd')
@click.option("--config", "-c", type=click.Path(dir_okay=False), default=None,
              help="YAML settings file (default: gaussqkd.yaml when present)")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging on stderr")
@click.pass_context
def cli(ctx, config, verbose):
    """gaussqkd - continuous-variable QKD efficiency analysis.

    Inspect symmetric two-mode Gaussian states, query security windows,
    sweep protocol efficiencies and run the discrete companion protocols.

    Basic Usage Examples:

    \b
    # Entanglement report for a state
    gaussqkd state --lambda 2 --cx 1.5 --cp 0.5

    \b
    # Efficiency sweep over the default grid
    gaussqkd sweep --attack individual --out results/

    For more information about a specific command, run:
    gaussqkd COMMAND --help
    """
    _configure_logging(verbose)
    ctx.ensure_object(dict)
    ctx.obj["config"] = config
    ctx.obj["verbose"] = verbose


@cli.command()
@state_options
@format_option
@click.pass_context
@handle_errors
def state(ctx, lam, c_x, c_p, output_format):
    """Physicality and entanglement report for a symmetric standard state.

    Examples:

    \b
    gaussqkd state --lambda 2 --cx 1.5 --cp 0.5
    gaussqkd state --lambda 1 --cx 0 --cp 0 --format json
    """
    _run_config(ctx, output_format)
    shared = SymmetricStdState(lam, c_x, c_p)
    gamma = shared.covariance()
    validity = validate_state(gamma)
    form = to_standard_form(gamma)
    report = {
        "lambda": shared.lam,
        "c_x": shared.c_x,
        "c_p": shared.c_p,
        "physical": validity.is_physical,
        "nppt": shared.is_nppt,
        "log_negativity": shared.log_negativity,
        "log_negativity_spectrum": log_negativity(gamma),
        "purity": shared.purity,
        "symplectic_spectrum": list(validity.symplectic_spectrum),
        "ppt_spectrum": list(ppt_spectrum(gamma)),
        "standard_form": [form.lambda_a, form.lambda_b, form.k_x, form.k_p],
    }
    _emit(report, output_format, "Gaussian state")


@cli.command()
@state_options
@click.option("--attack", type=click.Choice([a.value for a in Attack]), default=None,
              help="Attack model [default: individual]")
@click.option("--x0a", type=float, default=1.0, show_default=True, help="Alice's position outcome")
@click.option("--x0b", type=float, default=None, help="Bob's position outcome; adds a per-pair verdict")
@click.option("--sigma", type=float, default=None, help="Finite squeezed-measurement width")
@click.option("--efficiency", "with_efficiency", is_flag=True, help="Also integrate the protocol efficiency")
@format_option
@click.pass_context
@handle_errors
def security(ctx, lam, c_x, c_p, attack, x0a, x0b, sigma, with_efficiency, output_format):
    """Acceptance window and security verdict.

    Examples:

    \b
    gaussqkd security --lambda 2 --cx 1.5 --cp 0.5 --x0a 1.0 --x0b 1.2
    gaussqkd security --lambda 2 --cx 1.5 --cp 0.5 --attack coherent
    """
    config = _run_config(ctx, output_format, protocol={"attack": attack, "sigma": sigma})
    attack = config.settings.protocol.attack
    shared = SymmetricStdState(lam, c_x, c_p)
    interval = accept_interval(shared, x0a, attack)
    lower, upper = interval.bounds(x0a)

    report: Dict[str, Any] = {
        "attack": attack.value,
        "alpha" if attack == Attack.INDIVIDUAL else "beta": interval.param,
        "lo_factor": interval.lo_factor,
        "hi_factor": interval.hi_factor,
        "x0a": x0a,
        "x0b_min": float(lower),
        "x0b_max": float(upper),
        "length": interval.length(x0a),
    }
    if output_format != "text":
        report["interval"] = interval.describe()
    if x0b is not None:
        measurement = MeasurementModel(config.settings.protocol.sigma)
        report["error_rate"] = error_rate(shared, x0a, x0b, measurement)
        report["eve_overlap"] = eve_overlap(shared, x0a, x0b)
        report["margin"] = security_margin(shared, x0a, x0b, attack)
        report["inside_window"] = interval.contains(x0a, x0b)
        report["secure"] = security_check(shared, x0a, x0b, attack)
    if with_efficiency:
        report["efficiency"] = efficiency(shared, attack, config.settings.quadrature_config())

    if output_format == "text":
        console.print(interval.describe(), highlight=False)
    _emit(report, output_format, f"Security ({attack.value} attacks)")


@cli.command("sweep")
@click.option("--grid", type=click.Path(exists=True, dir_okay=False), default=None,
              help="CSV of lambda,c_x,c_p triples (default: built-in grid)")
@click.option("--attack", type=click.Choice([a.value for a in Attack]), default=None,
              help="Attack model [default: individual]")
@click.option("--threads", type=int, default=None, help="Worker threads (default: logical cores)")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True,
              help="Directory for sweep.csv, skipped.csv and the settings dump")
@click.option("--verify", is_flag=True, help="Cross-check every point against Monte-Carlo")
@seed_option
@format_option
@click.pass_context
@handle_errors
def sweep_command(ctx, grid, attack, threads, out_dir, verify, seed, output_format):
    """Efficiency over a grid of states, written as CSV.

    Examples:

    \b
    gaussqkd sweep --out results/
    gaussqkd sweep --grid grid.csv --attack coherent --threads 4
    """
    config = _run_config(ctx, output_format, seed=seed, threads=threads, protocol={"attack": attack})
    settings = config.settings
    points = load_grid_csv(grid) if grid else default_grid(settings.grid)
    result = sweep(points, settings.protocol.attack, settings.quadrature_config(), settings.threads, verify)

    generator = OutputGenerator(out_dir)
    records_path, skipped_path = write_sweep(result, generator)
    settings.dump_yaml(generator)

    report = {
        "attack": settings.protocol.attack.value,
        "grid_points": len(points),
        "records": len(result.records),
        "skipped": len(result.skipped),
        "records_csv": records_path,
        "skipped_csv": skipped_path,
    }
    if verify:
        report["inconsistent"] = len(result.inconsistent)
    if output_format == "json":
        report["rows"] = [r.as_dict() for r in result.records]
    _emit(report, output_format, "Sweep")


@cli.command()
@click.option("--epsilon", type=float, default=0.2, show_default=True, help="Raw bit error rate")
@click.option("--M", "--block-size", "block_size", type=int, default=2, show_default=True, help="Block size")
@click.option("--trials", type=int, default=None, help="Simulated blocks [default: from settings]")
@click.option("--target", type=float, default=None, help="Also report the block size reaching this error")
@golden_option("Verify the closed form on reference values and exit")
@seed_option
@format_option
@click.pass_context
@handle_errors
def cad(ctx, epsilon, block_size, trials, target, check_golden, seed, output_format):
    """Classical advantage distillation: closed form and simulation.

    Examples:

    \b
    gaussqkd cad --epsilon 0.2 --M 2
    gaussqkd cad --epsilon 0.4 --target 0.01
    """
    config = _run_config(ctx, output_format, seed=seed, protocol={"cad_trials": trials})
    if check_golden:
        bound_ok = all(
            cad_error(e, m) < (e / (1 - e)) ** m for e in (0.05, 0.2, 0.4) for m in (1, 2, 3, 5, 10)
        )
        _golden([
            ("eps=0.2, M=2 -> 0.04/0.68", math.isclose(cad_error(0.2, 2), 0.04 / 0.68, rel_tol=1e-12)),
            ("eps=0.2, M=1 -> 0.2", math.isclose(cad_error(0.2, 1), 0.2, rel_tol=1e-12)),
            ("eps_M < (eps / (1 - eps))^M", bound_ok),
        ])
        return

    result = simulate_cad(epsilon, block_size, config.settings.protocol.cad_trials, config.settings.seed)
    report = result.as_dict()
    report["standard_error"] = result.standard_error
    report["consistent"] = result.consistent()
    if target is not None:
        report["blocks_needed"] = blocks_needed(epsilon, target)
    _emit(report, output_format, "Advantage distillation")


@cli.command("vernam")
@click.option("--message", "-m", default=None, help="Message bits, e.g. 010011101")
@click.option("--key", "-k", default=None, help="Key bits of the same length (default: random)")
@golden_option("Verify the reference example and exit")
@seed_option
@format_option
@click.pass_context
@handle_errors
def vernam_command(ctx, message, key, check_golden, seed, output_format):
    """One-time pad: XOR of message and key.

    Examples:

    \b
    gaussqkd vernam -m 010011101 -k 110100011
    """
    config = _run_config(ctx, output_format, seed=seed)
    if check_golden:
        m, k = BitString.parse("010011101"), BitString.parse("110100011")
        _golden([
            ("010011101 xor 110100011 = 100111110", str(vernam(m, k)) == "100111110"),
            ("decrypt(encrypt(m)) = m", vernam(vernam(m, k), k) == m),
        ])
        return
    if message is None:
        raise click.UsageError("--message is required unless --check-golden is given")

    plain = BitString.parse(message)
    if key is None:
        rng = np.random.default_rng(np.random.SeedSequence([config.settings.seed]))
        pad = BitString.random(len(plain), rng)
    else:
        pad = BitString.parse(key)
    cipher = vernam(plain, pad)
    _emit({"message": str(plain), "key": str(pad), "cipher": str(cipher)}, output_format, "Vernam")


@cli.command("rsa")
@click.option("--p", "p", type=int, default=61, show_default=True, help="First prime")
@click.option("--q", "q", type=int, default=53, show_default=True, help="Second prime")
@click.option("--l", "l", type=int, default=17, show_default=True, help="Public exponent")
@click.option("--message", "-m", type=int, default=123, show_default=True, help="Integer message in [0, n)")
@golden_option("Verify the 61/53/17 reference chain and exit")
@format_option
@click.pass_context
@handle_errors
def rsa_command(ctx, p, q, l, message, check_golden, output_format):  # noqa: E741
    """Toy RSA key generation, encryption and decryption.

    Examples:

    \b
    gaussqkd rsa --p 61 --q 53 --l 17 -m 123
    gaussqkd rsa --check-golden
    """
    _run_config(ctx, output_format)
    if check_golden:
        keys = rsa_keygen(61, 53, 17)
        _golden([
            ("n = 3233", keys.n == 3233),
            ("phi = 3120", keys.phi == 3120),
            ("k = 2753", keys.k == 2753),
            ("enc(123) = 855", rsa_encrypt(123, 17, 3233) == 855),
            ("dec(855) = 123", rsa_decrypt(855, 2753, 3233) == 123),
        ])
        return

    keys = rsa_keygen(p, q, l)
    cipher = rsa_encrypt(message, keys.l, keys.n)
    report = {
        "p": keys.p, "q": keys.q, "n": keys.n, "phi": keys.phi, "l": keys.l, "k": keys.k,
        "message": message, "cipher": cipher, "decrypted": rsa_decrypt(cipher, keys.k, keys.n),
    }
    _emit(report, output_format, "RSA")


def _print_rounds(run: QubitProtocolRun, limit: int) -> None:
    table = Table(title=f"{run.protocol} rounds")
    for column in ["#", "A bit", "A basis", "B basis", "B bit", "sifted"]:
        table.add_column(column, justify="right")
    for row in run.table(limit):
        table.add_row(*row)
    console.print(table)


def _qubit_report(run: QubitProtocolRun, output_format: str, show_rounds: int) -> None:
    report = run.summary()
    if output_format == "text" and show_rounds:
        _print_rounds(run, show_rounds)
    if output_format == "json":
        report["sifted_positions"] = run.sifted_positions
    _emit(report, output_format, run.protocol)


@cli.command("bb84")
@click.option("--bits", "n_bits", type=int, default=10_000, show_default=True, help="Transmitted qubits")
@click.option("--eavesdrop", is_flag=True, help="Insert an intercept-resend eavesdropper")
@click.option("--threshold", type=float, default=None, help="Accepted error rate [default: 0.25]")
@click.option("--disclose", type=float, default=None, help="Share of the sifted key disclosed [default: 0.5]")
@click.option("--show-rounds", type=int, default=0, help="Print the first N rounds")
@golden_option("Replay the nine-round reference table and exit")
@seed_option
@format_option
@click.pass_context
@handle_errors
def bb84_command(ctx, n_bits, eavesdrop, threshold, disclose, show_rounds, check_golden, seed, output_format):
    """BB84 with optional intercept-resend eavesdropping.

    Examples:

    \b
    gaussqkd bb84 --bits 100000 --eavesdrop
    gaussqkd bb84 --check-golden
    """
    config = _run_config(
        ctx, output_format, seed=seed,
        protocol={"bb84_threshold": threshold, "bb84_disclose_fraction": disclose},
    )
    protocol = config.settings.protocol
    if check_golden:
        a_bits, a_bases, b_bases, b_bits = zip(*WORKED_EXAMPLE)
        run = bb84_from_choices(a_bits, a_bases, b_bases, b_bits)
        _print_rounds(run, len(WORKED_EXAMPLE))
        _golden([
            ("sifted positions = 3, 4, 6, 8, 9", run.sifted_positions == [3, 4, 6, 8, 9]),
            ("sifted keys agree", run.alice_key == run.bob_key),
        ])
        return

    run = bb84_run(n_bits, eavesdrop, config.settings.seed, protocol.bb84_disclose_fraction, protocol.bb84_threshold)
    _qubit_report(run, output_format, show_rounds)


@cli.command("ekert")
@click.option("--pairs", "n_pairs", type=int, default=100_000, show_default=True, help="Singlet pairs")
@click.option("--show-rounds", type=int, default=0, help="Print the first N rounds")
@golden_option("Verify the exact CHSH values and exit")
@seed_option
@format_option
@click.pass_context
@handle_errors
def ekert_command(ctx, n_pairs, show_rounds, check_golden, seed, output_format):
    """Ekert91 with a CHSH test on the mismatched settings.

    Examples:

    \b
    gaussqkd ekert --pairs 100000
    """
    config = _run_config(ctx, output_format, seed=seed)
    if check_golden:
        run = ekert91_run(1000, config.settings.seed)
        _golden([
            ("quantum S = 2 sqrt(2)", math.isclose(chsh_value_exact(), 2 * math.sqrt(2), rel_tol=1e-12)),
            ("classical S <= 2", classical_chsh_bound() == 2.0),
            ("matching orientations are anticorrelated", run.error_rate == 0.0),
        ])
        return

    run = ekert91_run(n_pairs, config.settings.seed)
    _qubit_report(run, output_format, show_rounds)
    if output_format == "text":
        _print_correlations(run)


def _print_correlations(run: QubitProtocolRun) -> None:
    table = Table(title="Correlations E(A_i, B_j)")
    table.add_column("setting")
    for column in ["mean", "std. error", "rounds"]:
        table.add_column(column, justify="right")
    for (i, j), (mean, error, count) in sorted(run.correlations.items()):
        table.add_row(f"A{i + 1} B{j + 1}", f"{mean:+.4f}", f"{error:.4f}", str(count))
    console.print(table)


if __name__ == "__main__":
    cli()
