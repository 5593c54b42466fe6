// End-to-end campaign semantics against the simulated backend: creating a
// campaign makes probe records appear; pausing stops them (verified by
// polling the probes endpoint); resuming restarts the stream.

import assert from "node:assert/strict";
import { setTimeout as sleep } from "node:timers/promises";
import { after, before, test } from "node:test";

import { ApiClient } from "../src/client.js";
import { MockBackend, seededFixture } from "./mock_backend.js";

let backend: MockBackend;
let client: ApiClient;

before(async () => {
  backend = new MockBackend(seededFixture());
  client = new ApiClient(await backend.start());
});

after(async () => {
  await backend.stop();
});

async function pollProbeCount(serviceId: string): Promise<number> {
  return (await client.probes(serviceId)).length;
}

test("create -> records appear; pause -> stream stops; resume -> grows", async () => {
  const created = await client.createCampaign({
    campaign_id: "flow",
    mode: "intensive",
    services: ["svc0000"],
    sites: ["site-a"],
    start: new Date().toISOString(),
    operations: ["get_capabilities"],
    duration_s: 60,
    autostart: true,
  });
  assert.equal(created.state, "running");

  // records appear
  const deadline = Date.now() + 10_000;
  let count = 0;
  while (Date.now() < deadline) {
    count = await pollProbeCount("svc0000");
    if (count >= 2) break;
    await sleep(50);
  }
  assert.ok(count >= 2, `no records appeared (${count})`);

  // pause reflects only the server-acknowledged state, and the stream stops
  const paused = await client.pauseCampaign("flow");
  assert.equal(paused.state, "paused");
  await sleep(250); // allow in-flight emission to land
  const frozen = await pollProbeCount("svc0000");
  await sleep(500);
  assert.equal(await pollProbeCount("svc0000"), frozen);

  // resume restarts the stream
  const resumed = await client.resumeCampaign("flow");
  assert.equal(resumed.state, "running");
  const growDeadline = Date.now() + 10_000;
  let grown = false;
  while (Date.now() < growDeadline) {
    if ((await pollProbeCount("svc0000")) > frozen) {
      grown = true;
      break;
    }
    await sleep(50);
  }
  assert.ok(grown, "stream did not resume");
  await client.pauseCampaign("flow");
});

test("campaign report reflects the emitter", async () => {
  await client.createCampaign({
    campaign_id: "short",
    mode: "intensive",
    services: ["svc0001"],
    sites: ["site-a", "site-b"],
    start: new Date().toISOString(),
    operations: ["get_capabilities"],
    duration_s: 0.3,
    autostart: true,
  });
  const deadline = Date.now() + 10_000;
  let report = await client.campaignReport("short");
  while (Date.now() < deadline && report.state !== "done") {
    await sleep(50);
    report = await client.campaignReport("short");
  }
  assert.equal(report.state, "done");
  assert.equal(report.fired + report.missed, report.due);
  assert.equal(await pollProbeCount("svc0001"), report.fired);
});

test("campaign listing shows acknowledged states", async () => {
  const campaigns = await client.campaigns();
  const states = Object.fromEntries(campaigns.map((c) => [c.campaign_id, c.state]));
  assert.equal(states["flow"], "paused");
  assert.equal(states["short"], "done");
});
