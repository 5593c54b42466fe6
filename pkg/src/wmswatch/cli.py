"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 runtime failure.  All commands
share one embedded store selected with --store (default ./wmswatch.db).
"""

from __future__ import annotations

import datetime as dt
import json
import sys
from pathlib import Path

import click

from .crawler import (
    CrawlConfig,
    CrawlSeed,
    RequestsFetcher,
    crawl as run_crawl,
    dedup_key,
    form_getcapabilities_url,
    service_id_for,
    validate_wms_url,
)
from .errors import WmsWatchError
from .model import Liveness, Provenance, ServiceRecord, parse_ts
from .probe import (
    HttpTransport,
    Operation,
    build_getmap_spec,
    probe_getcapabilities,
    probe_getmap,
)
from .model.capabilities import parse_capabilities
from .analytics.reports import rows_to_csv
from .store import CampaignService, RestApi, Store, serve_rest


def _store(ctx) -> Store:
    # opened lazily so `--help` and usage errors never touch the file
    if "store" not in ctx.obj:
        ctx.obj["store"] = Store(ctx.obj["store_path"])
    return ctx.obj["store"]


@click.group()
@click.option("--store", "store_path", default="wmswatch.db",
              show_default=True, help="Path of the embedded store.")
@click.pass_context
def cli(ctx, store_path):
    """Discovery, monitoring and survey analytics for public WMS endpoints."""
    ctx.ensure_object(dict)
    ctx.obj["store_path"] = store_path


@cli.command("crawl")
@click.option("--seeds", "seeds_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON-lines file, one seed object per line.")
@click.option("--budget", default=200, show_default=True,
              help="Maximum page fetches.")
@click.option("--politeness", default=1.0, show_default=True,
              help="Minimum seconds between requests to one host.")
@click.pass_context
def crawl_cmd(ctx, seeds_file, budget, politeness):
    """Discover WMS endpoints from seed pages and directories."""
    seeds = []
    for line in Path(seeds_file).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            seeds.append(CrawlSeed.from_json_line(line))
    if not seeds:
        raise click.UsageError("seed file contains no seeds")
    config = CrawlConfig(politeness_delay_s=politeness)
    result = run_crawl(seeds, budget=budget, fetcher=RequestsFetcher(),
                       config=config)
    store = _store(ctx)
    for record in result.services:
        store.upsert_service(record, result.capabilities.get(record.id))
    click.echo(json.dumps({"discovered": len(result.services),
                           **result.summary.to_dict()}, indent=2))


@cli.command("validate")
@click.argument("url")
@click.option("--save/--no-save", default=False,
              help="Admit a valid endpoint into the store.")
@click.pass_context
def validate_cmd(ctx, url, save):
    """Check whether URL hosts a live WMS (forms the KVPs if missing)."""
    formed = form_getcapabilities_url(url)
    result, doc = validate_wms_url(formed, RequestsFetcher())
    out = {"url": formed, "verdict": result.verdict.value,
           "http_status": result.http_status,
           "root_element": result.root_element,
           "elapsed_ms": result.elapsed_ms}
    if doc is not None:
        out["service_version"] = doc.service_version
        out["named_layers"] = doc.named_layer_count()
        if save:
            key = dedup_key(formed)
            now = dt.datetime.now(dt.timezone.utc)
            record = ServiceRecord(
                id=service_id_for(key), canonical_url=key,
                discovered_from=Provenance.MANUAL,
                first_seen=now, last_seen=now, liveness=Liveness.VALID)
            _store(ctx).upsert_service(record, doc)
            out["saved_as"] = record.id
    click.echo(json.dumps(out, indent=2))
    if result.verdict.value != "valid-wms":
        sys.exit(2)


@cli.command("probe")
@click.argument("url")
@click.option("--op", "operation", type=click.Choice(["getcap", "getmap"]),
              default="getcap", show_default=True)
@click.option("--site", default="cli", show_default=True,
              help="Site id recorded on the observation.")
@click.option("--timeout", default=60.0, show_default=True)
@click.pass_context
def probe_cmd(ctx, url, operation, site, timeout):
    """Issue one monitoring request against URL and print the record."""
    now = dt.datetime.now(dt.timezone.utc)
    key = dedup_key(url)
    service = ServiceRecord(id=service_id_for(key), canonical_url=key,
                            discovered_from=Provenance.MANUAL,
                            first_seen=now, last_seen=now)
    transport = HttpTransport()
    if operation == "getcap":
        record = probe_getcapabilities(service, site, transport,
                                       timeout_s=timeout)
    else:
        result = transport.perform(form_getcapabilities_url(key),
                                   timeout_s=timeout)
        body = getattr(result, "body", None)
        if body is None:
            raise WmsWatchError("could not fetch capabilities to build "
                                "the GetMap request")
        spec = build_getmap_spec(parse_capabilities(body))
        record = probe_getmap(service, spec, site, transport, timeout_s=timeout)
    click.echo(json.dumps(record.to_dict(), indent=2))
    if not record.success:
        sys.exit(2)


@cli.group("campaign")
def campaign_group():
    """Create and drive monitoring campaigns."""


@campaign_group.command("create")
@click.option("--config", "config_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Campaign config JSON (see README for the schema).")
@click.pass_context
def campaign_create(ctx, config_file):
    body = json.loads(Path(config_file).read_text())
    service = CampaignService(_store(ctx))
    out = service.create(body)
    click.echo(json.dumps(out, indent=2))


@campaign_group.command("run")
@click.option("--id", "campaign_id", required=True)
@click.option("--wait-s", default=86400.0, show_default=True,
              help="Maximum seconds to wait for completion.")
@click.pass_context
def campaign_run(ctx, campaign_id, wait_s):
    service = CampaignService(_store(ctx))
    service.start(campaign_id)
    service.wait(campaign_id, timeout_s=wait_s)
    click.echo(json.dumps(service.report(campaign_id), indent=2))


@campaign_group.command("pause")
@click.option("--id", "campaign_id", required=True)
@click.pass_context
def campaign_pause(ctx, campaign_id):
    click.echo(json.dumps(CampaignService(_store(ctx)).pause(campaign_id),
                          indent=2))


@campaign_group.command("resume")
@click.option("--id", "campaign_id", required=True)
@click.pass_context
def campaign_resume(ctx, campaign_id):
    click.echo(json.dumps(CampaignService(_store(ctx)).resume(campaign_id),
                          indent=2))


@campaign_group.command("report")
@click.option("--id", "campaign_id", required=True)
@click.pass_context
def campaign_report(ctx, campaign_id):
    click.echo(json.dumps(CampaignService(_store(ctx)).report(campaign_id),
                          indent=2))


@cli.command("analyze")
@click.option("--report", "report_name", required=True,
              help="accessibility | errors | versions | crs | keywords | "
                   "coverage | yearly | providers | power_law_providers | "
                   "power_law_response_times | continent_matrix | regression")
@click.option("--from", "frm", default=None, help="Window start (ISO 8601).")
@click.option("--to", default=None, help="Window end (ISO 8601).")
@click.option("--op", default="get_capabilities", show_default=True)
@click.option("--param", "params", multiple=True,
              help="Extra key=value report parameters (repeatable).")
@click.pass_context
def analyze_cmd(ctx, report_name, frm, to, op, params):
    """Compute a named survey report from the store and print JSON."""
    query: dict[str, list[str]] = {"op": [op]}
    if frm:
        query["from"] = [parse_ts(frm).isoformat()]
    if to:
        query["to"] = [parse_ts(to).isoformat()]
    for item in params:
        key, _, value = item.partition("=")
        query[key] = [value]
    api = RestApi(_store(ctx))
    status, payload = api.handle("GET", f"/api/v1/reports/{report_name}",
                                 query, None, None)
    click.echo(json.dumps(payload, indent=2))
    if status != 200:
        sys.exit(2)


@cli.command("serve")
@click.option("--bind", default="127.0.0.1:8375", show_default=True)
@click.option("--token", default=None,
              help="Shared token required on mutating requests.")
@click.pass_context
def serve_cmd(ctx, bind, token):
    """Run the REST data-access service until interrupted."""
    store = _store(ctx)
    campaigns = CampaignService(store)
    server = serve_rest(bind, store, campaigns, token=token)
    click.echo(f"serving on {server.url}")
    try:
        while True:
            import time
            time.sleep(3600)
    except KeyboardInterrupt:
        pass
    finally:
        campaigns.shutdown()
        server.stop()


_EXPORT_TABLES = ("services", "sites", "probes", "layers", "campaigns")


@cli.command("export")
@click.option("--table", required=True, type=click.Choice(_EXPORT_TABLES))
@click.option("--format", "fmt", default="json", show_default=True,
              type=click.Choice(["csv", "json"]))
@click.option("--service", "service_id", default=None,
              help="Restrict probes/layers to one service.")
@click.pass_context
def export_cmd(ctx, table, fmt, service_id):
    """Dump a store table to stdout."""
    store = _store(ctx)
    if table == "services":
        rows = [s.to_dict() for s in store.list_services(limit=10**9)[0]]
    elif table == "sites":
        rows = [s.to_dict() for s in store.list_sites()]
    elif table == "campaigns":
        rows = store.list_campaigns()
    elif table == "layers":
        if service_id:
            rows = store.layers_for_service(service_id)
        else:
            rows = [l.to_dict() for l in store.all_layer_records()]
    else:
        far_past = dt.datetime(1970, 1, 1, tzinfo=dt.timezone.utc)
        far_future = dt.datetime(9999, 1, 1, tzinfo=dt.timezone.utc)
        by_service = {}
        for operation in Operation:
            for sid, records in store.probes_by_service(
                    operation, far_past, far_future).items():
                if service_id and sid != service_id:
                    continue
                by_service.setdefault(sid, []).extend(records)
        rows = [r.to_dict() for records in by_service.values() for r in records]

    if fmt == "json":
        click.echo(json.dumps(rows, indent=2))
        return
    if not rows:
        click.echo("")
        return
    flattened = [_flatten(row) for row in rows]
    fieldnames = sorted({k for row in flattened for k in row})
    click.echo(rows_to_csv(flattened, fieldnames))


def _flatten(row: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in row.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, prefix=f"{name}."))
        elif isinstance(value, list):
            out[name] = json.dumps(value)
        else:
            out[name] = value
    return out


def main(argv=None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli(args=argv, standalone_mode=False, obj={})
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    except WmsWatchError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except Exception as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
