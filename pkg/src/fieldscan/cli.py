"""Command-line client.

Every subcommand talks HTTP to the service layer: to a remote server when
--server (or FIELDSCAN_SERVER) is set, otherwise to an in-process instance
of the same app, so both paths exercise identical code.

Search flags mirror the SearchSpec config keys one for one; a --config file
provides defaults and explicit flags override it.  FIELDSCAN_WORKERS
overrides the worker count when the flag is absent.

Exit codes: 0 done, 1 internal failure, 2 bad configuration, 3 interrupted
(checkpoint left behind; `fieldscan resume` continues it).
"""

from __future__ import annotations

import json
import os
import signal
import sys
import time

import click
import httpx

from .pipeline import (EXIT_CONFIG, EXIT_INTERRUPTED, EXIT_OK, ConfigError,
                       SearchSpec, parse_config, spec_from_strings)

_RUNTIME_KEYS = ("workers", "checkpoint_interval", "output_path", "checkpoint_path")


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=3600.0)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # testclient import warns about httpx pinning
        from fastapi.testclient import TestClient
    from .service import create_app
    return TestClient(create_app(), raise_server_exceptions=False)


def _fail(resp) -> None:
    try:
        detail = resp.json().get("detail", resp.text)
    except Exception:
        detail = resp.text
    raise click.ClickException(f"HTTP {resp.status_code}: {detail}")


def _spec_options(fn):
    """The SearchSpec keys as flags, all optional strings (config may fill them)."""
    for key in reversed(["degree", "r1", "r2", "disc_bound", "excluded_norms",
                         "eval_range", "s1_values", "a_n_max", "parity_values",
                         "workers", "checkpoint_interval", "output_path",
                         "checkpoint_path"]):
        fn = click.option(f"--{key.replace('_', '-')}", key, default=None,
                          help=f"SearchSpec.{key}")(fn)
    return fn


def _build_spec(config, flag_items) -> SearchSpec:
    items = parse_config(config) if config else {}
    items.update({k: v for k, v in flag_items.items() if v is not None})
    if "workers" not in items and os.environ.get("FIELDSCAN_WORKERS"):
        items["workers"] = os.environ["FIELDSCAN_WORKERS"]
    return spec_from_strings(items)


def _spec_body(spec: SearchSpec) -> dict:
    body = spec.semantic_key()
    for key in _RUNTIME_KEYS:
        body[key] = getattr(spec, key)
    return body


@click.group()
@click.option("--server", envvar="FIELDSCAN_SERVER", default=None,
              help="base URL of a running fieldscan server; default in-process")
@click.pass_context
def main(ctx, server):
    """Number fields of bounded discriminant: bounds, planning, search."""
    ctx.obj = server


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8711, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn
    uvicorn.run("fieldscan.service:app", host=host, port=port)


@main.command()
@click.option("--degree", required=True, type=int)
@click.option("--r1", required=True, type=int)
@click.option("--r2", required=True, type=int)
@click.option("--norms", default="", help="comma-separated hypothesized norms")
@click.option("--as-json", "as_json", is_flag=True)
@click.pass_obj
def bounds(server, degree, r1, r2, norms, as_json):
    """Discriminant lower bounds per hypothesized prime-ideal norm."""
    norms_list = [int(t) for t in norms.replace(",", " ").split()]
    with _client(server) as client:
        resp = client.post("/bounds", json={"degree": degree, "r1": r1,
                                            "r2": r2, "norms": norms_list})
    if resp.status_code != 200:
        _fail(resp)
    rows = resp.json()
    if as_json:
        click.echo(json.dumps(rows, indent=1))
        return
    click.echo(f"# degree {degree}, signature ({r1},{r2})")
    click.echo(f"{'norm':>6} {'y_opt':>10} {'rhs':>12} {'|d| >=':>14}")
    for row in rows:
        label = row["norm"] if row["norm"] else "any"
        click.echo(f"{label:>6} {row['y_opt']:>10.4f} {row['rhs']:>12.6f} "
                   f"{row['implied_bound']:>14.0f}")


@main.command()
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--blocks", is_flag=True, help="also count blocks per cell (slower)")
@_spec_options
@click.pass_obj
def plan(server, config, blocks, **flags):
    """List the enumeration cells a spec splits into, costliest first."""
    try:
        spec = _build_spec(config, flags)
    except ConfigError as exc:
        raise SystemExit(_config_error(exc))
    body = _spec_body(spec)
    body["include_blocks"] = blocks
    with _client(server) as client:
        resp = client.post("/plan", json=body)
    if resp.status_code != 200:
        _fail(resp)
    cells = resp.json()
    click.echo(f"{'cell':>14} {'s1':>3} {'a_n':>5} {'c':>2} {'est_cost':>10}"
               + ("  blocks" if blocks else ""))
    for c in cells:
        line = (f"{c['cell_id']:>14} {c['s1']:>3} {c['a_n']:>5} "
                f"{c['parity_c']:>2} {c['estimated_cost']:>10.1f}")
        if blocks:
            line += f"  {c['total_blocks']}"
        click.echo(line)
    click.echo(f"# {len(cells)} cells")


def _config_error(exc) -> int:
    click.echo(f"configuration error: {exc}", err=True)
    return EXIT_CONFIG


def _poll_to_completion(client, run_id, quiet) -> int:
    interrupted = {"flag": False}

    def _stop(signum, frame):
        interrupted["flag"] = True

    old = signal.signal(signal.SIGTERM, _stop)
    try:
        last = ""
        while True:
            if interrupted["flag"]:
                click.echo(f"\ninterrupted; resume with the same spec "
                           f"(checkpoint kept)", err=True)
                return EXIT_INTERRUPTED
            st = client.get(f"/runs/{run_id}").json()
            if not quiet and st["chunks_total"]:
                msg = f"\r{st['chunks_done']}/{st['chunks_total']} chunks"
                if msg != last:
                    click.echo(msg, nl=False, err=True)
                    last = msg
            if st["state"] in ("complete", "interrupted", "failed"):
                if not quiet and last:
                    click.echo("", err=True)
                return _finish(client, run_id, st)
            time.sleep(0.2)
    except KeyboardInterrupt:
        click.echo(f"\ninterrupted; resume with the same spec (checkpoint kept)",
                   err=True)
        return EXIT_INTERRUPTED
    finally:
        signal.signal(signal.SIGTERM, old)


def _finish(client, run_id, st) -> int:
    if st["state"] == "failed":
        click.echo(f"run failed: {st['error']}", err=True)
        return EXIT_CONFIG if (st["error"] or "").startswith("config:") else 1
    if st["state"] == "interrupted":
        click.echo("run interrupted; checkpoint kept", err=True)
        return EXIT_INTERRUPTED
    rep = client.get(f"/runs/{run_id}/report")
    if rep.status_code != 200:
        _fail(rep)
    data = rep.json()
    st_block = data["stats"]
    click.echo(f"generated {st_block['generated']}, "
               f"passed {st_block['passed']}, "
               f"accepted {data['verify']['accepted']}, "
               f"unresolved {data['verify']['unresolved']}")
    click.echo(f"distinct field discriminants: {len(data['groups'])}")
    if data["min_abs_field_disc"] is not None:
        click.echo(f"minimum |field disc|: {data['min_abs_field_disc']}")
    out = data.get("output_path", "")
    if out:
        click.echo(f"report: {out} (+ .json, .export)")
    return EXIT_OK


@main.command()
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--quiet", is_flag=True)
@_spec_options
@click.pass_obj
def run(server, config, quiet, **flags):
    """Run (or resume) the full search; exit 0 done, 3 interrupted."""
    try:
        spec = _build_spec(config, flags)
    except ConfigError as exc:
        raise SystemExit(_config_error(exc))
    with _client(server) as client:
        resp = client.post("/runs", json=_spec_body(spec))
        if resp.status_code != 202:
            _fail(resp)
        run_id = resp.json()["run_id"]
        if not quiet:
            click.echo(f"run {run_id}", err=True)
        raise SystemExit(_poll_to_completion(client, run_id, quiet))


@main.command()
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--quiet", is_flag=True)
@_spec_options
@click.pass_obj
def resume(server, config, quiet, **flags):
    """Continue an interrupted search from its checkpoint."""
    try:
        spec = _build_spec(config, flags)
    except ConfigError as exc:
        raise SystemExit(_config_error(exc))
    if not os.path.exists(spec.checkpoint_path):
        raise SystemExit(_config_error(
            f"no checkpoint at {spec.checkpoint_path}; nothing to resume"))
    with _client(server) as client:
        resp = client.post("/runs", json=_spec_body(spec))
        if resp.status_code != 202:
            _fail(resp)
        run_id = resp.json()["run_id"]
        if not quiet:
            click.echo(f"resuming as run {run_id}", err=True)
        raise SystemExit(_poll_to_completion(client, run_id, quiet))


@main.command()
@click.argument("polyfile", type=click.Path(exists=True))
@click.option("--degree", required=True, type=int)
@click.option("--r1", required=True, type=int)
@click.option("--r2", required=True, type=int)
@click.option("--disc-bound", required=True, type=int)
@click.pass_obj
def verify(server, polyfile, degree, r1, r2, disc_bound):
    """Verify monic polynomials from a file (dense coefficients, leading 1)."""
    polys = []
    with open(polyfile, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                polys.append([int(t) for t in line.replace(",", " ").split()])
    if not polys:
        raise SystemExit(_config_error(f"{polyfile} contains no polynomials"))
    with _client(server) as client:
        resp = client.post("/verify", json={
            "degree": degree, "r1": r1, "r2": r2, "disc_bound": disc_bound,
            "polynomials": polys})
    if resp.status_code != 200:
        _fail(resp)
    for v in resp.json():
        coeffs = ",".join(map(str, v["coeffs"]))
        extra = (f" field_disc={v['field_disc']}" if v["verdict"] == "accepted"
                 else f" ({v['detail']})" if v["detail"] else "")
        click.echo(f"{v['verdict']:>10}  {coeffs}{extra}")


@main.command()
@click.argument("run_id")
@click.pass_obj
def status(server, run_id):
    """Progress of a run on a remote server."""
    with _client(server) as client:
        resp = client.get(f"/runs/{run_id}")
    if resp.status_code != 200:
        _fail(resp)
    click.echo(json.dumps(resp.json(), indent=1))


if __name__ == "__main__":
    main()
