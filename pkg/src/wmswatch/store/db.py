"""Embedded single-node store with file durability.

One sqlite connection guarded by a re-entrant lock: the scheduler's sink is
the single writer, REST handlers are concurrent readers, and sqlite plus
the lock serialize whatever overlaps.  Probe timestamps are stored twice:
ISO text for humans and epoch microseconds for range queries, so half-open
interval semantics never depend on string formatting.
"""

from __future__ import annotations

import datetime as dt
import json
import sqlite3
import threading
from typing import Iterable, Sequence

from ..errors import (
    BadRange,
    ClockSkew,
    DuplicateRecord,
    ReferentialViolation,
    UnknownId,
)
from ..model.types import CapabilitiesDoc, LayerRecord, ServiceRecord, parse_ts
from ..probe.types import Operation, ProbeRecord
from ..scheduler.types import MonitoringSite

CLOCK_SKEW_ALLOWANCE_S = 60.0

_SCHEMA = """
CREATE TABLE IF NOT EXISTS services (
    id TEXT PRIMARY KEY,
    canonical_url TEXT UNIQUE NOT NULL,
    doc TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS capabilities (
    service_id TEXT PRIMARY KEY REFERENCES services(id),
    service_version TEXT NOT NULL,
    doc TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS layers (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    service_id TEXT NOT NULL REFERENCES services(id),
    parent_id INTEGER REFERENCES layers(id),
    position INTEGER NOT NULL,
    doc TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS layers_by_service ON layers(service_id);
CREATE TABLE IF NOT EXISTS sites (
    site_id TEXT PRIMARY KEY,
    doc TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS campaigns (
    campaign_id TEXT PRIMARY KEY,
    config TEXT NOT NULL,
    state TEXT NOT NULL,
    report TEXT
);
CREATE TABLE IF NOT EXISTS probes (
    service_id TEXT NOT NULL REFERENCES services(id),
    site_id TEXT NOT NULL REFERENCES sites(site_id),
    operation TEXT NOT NULL,
    epoch_us INTEGER NOT NULL,
    doc TEXT NOT NULL,
    PRIMARY KEY (service_id, site_id, operation, epoch_us)
);
CREATE INDEX IF NOT EXISTS probes_by_key
    ON probes(service_id, operation, epoch_us);
"""


def _epoch_us(ts: dt.datetime) -> int:
    return int(ts.timestamp() * 1_000_000)


class Store:
    """All persistence behind one object; ``:memory:`` for tests."""

    def __init__(self, path: str = ":memory:"):
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.execute("PRAGMA foreign_keys = ON")
        self._lock = threading.RLock()
        with self._lock, self._conn:
            self._conn.executescript(_SCHEMA)

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    # --- services and capabilities -------------------------------------

    def upsert_service(self, record: ServiceRecord,
                       doc: CapabilitiesDoc | None = None) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO services (id, canonical_url, doc) VALUES (?, ?, ?) "
                "ON CONFLICT(id) DO UPDATE SET canonical_url = excluded.canonical_url, "
                "doc = excluded.doc",
                (record.id, record.canonical_url, json.dumps(record.to_dict())))
            if doc is not None:
                self._store_capabilities(record.id, doc)

    def _store_capabilities(self, service_id: str, doc: CapabilitiesDoc) -> None:
        self._conn.execute(
            "INSERT INTO capabilities (service_id, service_version, doc) "
            "VALUES (?, ?, ?) ON CONFLICT(service_id) DO UPDATE SET "
            "service_version = excluded.service_version, doc = excluded.doc",
            (service_id, doc.service_version,
             json.dumps({k: v for k, v in doc.to_dict().items()
                         if k != "root_layers"})))
        self._conn.execute("DELETE FROM layers WHERE service_id = ?", (service_id,))

        def insert(layer: LayerRecord, parent_id: int | None, position: int) -> None:
            body = {k: v for k, v in layer.to_dict().items() if k != "children"}
            cur = self._conn.execute(
                "INSERT INTO layers (service_id, parent_id, position, doc) "
                "VALUES (?, ?, ?, ?)",
                (service_id, parent_id, position, json.dumps(body)))
            for i, child in enumerate(layer.children):
                insert(child, cur.lastrowid, i)

        for i, root in enumerate(doc.root_layers):
            insert(root, None, i)

    def get_service(self, service_id: str) -> ServiceRecord:
        with self._lock:
            row = self._conn.execute(
                "SELECT doc FROM services WHERE id = ?", (service_id,)).fetchone()
        if row is None:
            raise UnknownId(f"service {service_id!r}")
        return ServiceRecord.from_dict(json.loads(row[0]))

    def has_service(self, service_id: str) -> bool:
        with self._lock:
            return self._conn.execute(
                "SELECT 1 FROM services WHERE id = ?", (service_id,)
            ).fetchone() is not None

    def list_services(self, liveness: str | None = None,
                      continent: str | None = None,
                      limit: int = 100, offset: int = 0
                      ) -> tuple[list[ServiceRecord], int]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT doc FROM services ORDER BY id").fetchall()
        records = [ServiceRecord.from_dict(json.loads(r[0])) for r in rows]
        if liveness:
            records = [r for r in records if r.liveness.value == liveness]
        if continent:
            records = [r for r in records
                       if r.server_location is not None
                       and (r.server_location.continent or "") == continent]
        total = len(records)
        return records[offset:offset + limit], total

    def service_versions(self) -> list[str]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT service_version FROM capabilities").fetchall()
        return [r[0] for r in rows]

    def layers_for_service(self, service_id: str) -> list[dict]:
        """Flattened layer rows (pre-order) with parent pointers."""
        if not self.has_service(service_id):
            raise UnknownId(f"service {service_id!r}")
        with self._lock:
            rows = self._conn.execute(
                "SELECT id, parent_id, position, doc FROM layers "
                "WHERE service_id = ? ORDER BY id", (service_id,)).fetchall()
        out = []
        for layer_id, parent_id, position, doc in rows:
            body = json.loads(doc)
            body["layer_id"] = layer_id
            body["parent_id"] = parent_id
            body["position"] = position
            out.append(body)
        return out

    def get_capabilities_doc(self, service_id: str) -> CapabilitiesDoc:
        """Rebuild the full capabilities document (layer tree included)."""
        with self._lock:
            row = self._conn.execute(
                "SELECT doc FROM capabilities WHERE service_id = ?",
                (service_id,)).fetchone()
            layer_rows = self._conn.execute(
                "SELECT id, parent_id, position, doc FROM layers "
                "WHERE service_id = ? ORDER BY id", (service_id,)).fetchall()
        if row is None:
            raise UnknownId(f"no capabilities stored for service {service_id!r}")
        head = json.loads(row[0])

        bodies = {lid: json.loads(doc) for lid, _pid, _pos, doc in layer_rows}
        children: dict[int | None, list[tuple[int, int]]] = {}
        for lid, pid, pos, _doc in layer_rows:
            children.setdefault(pid, []).append((pos, lid))

        def build(layer_id: int) -> LayerRecord:
            body = dict(bodies[layer_id])
            body["children"] = []
            record = LayerRecord.from_dict(body)
            record.children = [build(cid) for _pos, cid in
                               sorted(children.get(layer_id, []))]
            record.is_cascading_parent = bool(record.children)
            return record

        head["root_layers"] = []
        doc = CapabilitiesDoc.from_dict(head)
        doc.root_layers = [build(cid) for _pos, cid in sorted(children.get(None, []))]
        return doc

    def all_layer_records(self) -> list[LayerRecord]:
        with self._lock:
            rows = self._conn.execute("SELECT doc FROM layers").fetchall()
        return [LayerRecord.from_dict(json.loads(r[0])) for r in rows]

    def layers_by_service(self) -> dict[str, list[LayerRecord]]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT service_id, doc FROM layers").fetchall()
        out: dict[str, list[LayerRecord]] = {}
        for service_id, doc in rows:
            out.setdefault(service_id, []).append(
                LayerRecord.from_dict(json.loads(doc)))
        return out

    # --- sites -----------------------------------------------------------

    def upsert_site(self, site: MonitoringSite) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO sites (site_id, doc) VALUES (?, ?) "
                "ON CONFLICT(site_id) DO UPDATE SET doc = excluded.doc",
                (site.site_id, json.dumps(site.to_dict())))

    def get_site(self, site_id: str) -> MonitoringSite:
        with self._lock:
            row = self._conn.execute(
                "SELECT doc FROM sites WHERE site_id = ?", (site_id,)).fetchone()
        if row is None:
            raise UnknownId(f"site {site_id!r}")
        return MonitoringSite.from_dict(json.loads(row[0]))

    def has_site(self, site_id: str) -> bool:
        with self._lock:
            return self._conn.execute(
                "SELECT 1 FROM sites WHERE site_id = ?", (site_id,)
            ).fetchone() is not None

    def list_sites(self) -> list[MonitoringSite]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT doc FROM sites ORDER BY site_id").fetchall()
        return [MonitoringSite.from_dict(json.loads(r[0])) for r in rows]

    # --- probe log ---------------------------------------------------------

    def append_probe(self, record: ProbeRecord,
                     now: dt.datetime | None = None) -> None:
        """Durable append; the log is append-only and deduplicated on the
        (service, site, operation, started_at) key."""
        now = now or dt.datetime.now(dt.timezone.utc)
        skew = (record.started_at - now).total_seconds()
        if skew > CLOCK_SKEW_ALLOWANCE_S:
            raise ClockSkew(
                f"started_at {skew:.0f}s in the future exceeds allowance")
        with self._lock:
            if not self.has_service(record.service_id):
                raise ReferentialViolation(f"unknown service {record.service_id!r}")
            if not self.has_site(record.site_id):
                raise ReferentialViolation(f"unknown site {record.site_id!r}")
            try:
                with self._conn:
                    self._conn.execute(
                        "INSERT INTO probes (service_id, site_id, operation, "
                        "epoch_us, doc) VALUES (?, ?, ?, ?, ?)",
                        (record.service_id, record.site_id,
                         record.operation.value, _epoch_us(record.started_at),
                         json.dumps(record.to_dict())))
            except sqlite3.IntegrityError as exc:
                raise DuplicateRecord(
                    f"probe already recorded for {record.service_id}/"
                    f"{record.site_id}/{record.operation.value}"
                    f"@{record.started_at.isoformat()}") from exc

    def query_probes(self, service_id: str, operation: Operation,
                     frm: dt.datetime, to: dt.datetime,
                     site_id: str | None = None) -> list[ProbeRecord]:
        """Records with frm <= started_at < to, ascending; half-open."""
        if frm > to:
            raise BadRange(f"from {frm.isoformat()} > to {to.isoformat()}")
        sql = ("SELECT doc FROM probes WHERE service_id = ? AND operation = ? "
               "AND epoch_us >= ? AND epoch_us < ?")
        args: list = [service_id, operation.value, _epoch_us(frm), _epoch_us(to)]
        if site_id is not None:
            sql += " AND site_id = ?"
            args.append(site_id)
        sql += " ORDER BY epoch_us, site_id"
        with self._lock:
            rows = self._conn.execute(sql, args).fetchall()
        return [ProbeRecord.from_dict(json.loads(r[0])) for r in rows]

    def probes_by_service(self, operation: Operation,
                          frm: dt.datetime, to: dt.datetime
                          ) -> dict[str, list[ProbeRecord]]:
        if frm > to:
            raise BadRange(f"from {frm.isoformat()} > to {to.isoformat()}")
        with self._lock:
            rows = self._conn.execute(
                "SELECT service_id, doc FROM probes WHERE operation = ? "
                "AND epoch_us >= ? AND epoch_us < ? ORDER BY epoch_us",
                (operation.value, _epoch_us(frm), _epoch_us(to))).fetchall()
        out: dict[str, list[ProbeRecord]] = {}
        for service_id, doc in rows:
            out.setdefault(service_id, []).append(
                ProbeRecord.from_dict(json.loads(doc)))
        return out

    # --- campaigns -----------------------------------------------------------

    def create_campaign(self, campaign_id: str, config: dict,
                        state: str = "created") -> None:
        with self._lock:
            try:
                with self._conn:
                    self._conn.execute(
                        "INSERT INTO campaigns (campaign_id, config, state) "
                        "VALUES (?, ?, ?)",
                        (campaign_id, json.dumps(config), state))
            except sqlite3.IntegrityError as exc:
                raise DuplicateRecord(f"campaign {campaign_id!r} exists") from exc

    def campaign(self, campaign_id: str) -> dict:
        with self._lock:
            row = self._conn.execute(
                "SELECT config, state, report FROM campaigns "
                "WHERE campaign_id = ?", (campaign_id,)).fetchone()
        if row is None:
            raise UnknownId(f"campaign {campaign_id!r}")
        return {"campaign_id": campaign_id, "config": json.loads(row[0]),
                "state": row[1],
                "report": json.loads(row[2]) if row[2] else None}

    def list_campaigns(self) -> list[dict]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT campaign_id, config, state, report FROM campaigns "
                "ORDER BY campaign_id").fetchall()
        return [{"campaign_id": r[0], "config": json.loads(r[1]), "state": r[2],
                 "report": json.loads(r[3]) if r[3] else None} for r in rows]

    def set_campaign_state(self, campaign_id: str, state: str) -> None:
        with self._lock, self._conn:
            cur = self._conn.execute(
                "UPDATE campaigns SET state = ? WHERE campaign_id = ?",
                (state, campaign_id))
            if cur.rowcount == 0:
                raise UnknownId(f"campaign {campaign_id!r}")

    def campaign_state(self, campaign_id: str) -> str:
        return self.campaign(campaign_id)["state"]

    def save_campaign_report(self, campaign_id: str, report: dict) -> None:
        with self._lock, self._conn:
            cur = self._conn.execute(
                "UPDATE campaigns SET report = ? WHERE campaign_id = ?",
                (json.dumps(report), campaign_id))
            if cur.rowcount == 0:
                raise UnknownId(f"campaign {campaign_id!r}")
