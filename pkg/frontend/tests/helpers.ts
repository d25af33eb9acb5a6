// Shared test scaffolding: spawn the real analytics service, upload a
// fixture corpus, and mount the app into a happy-dom window.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { Window } from "happy-dom";

import { mountApp, type App } from "../src/main";

export const SAMPLE_MBOX = `From prince@lagos-bank.example Mon Mar  3 09:10:00 2003
From: Prince Adewale <prince@lagos-bank.example>
To: victim1@home.example
Subject: URGENT business proposal
Date: Mon, 3 Mar 2003 09:10:00 +0000

Dear friend, I need your urgent help to transfer money from a dormant bank
account. Click the link below and send your account details.

From prince@lagos-bank.example Tue Mar  4 10:00:00 2003
From: Prince Adewale <prince@lagos-bank.example>
To: victim2@home.example
Cc: victim3@home.example
Subject: urgent transfer of funds
Date: Tue, 4 Mar 2003 10:00:00 +0000

The money transfer is ready. The bank officials require a small fee in
dollars before we proceed. This is very urgent.

From victim1@home.example Wed Mar  5 11:30:00 2003
From: victim1@home.example
To: prince@lagos-bank.example
Subject: Re: URGENT business proposal
Date: Wed, 5 Mar 2003 11:30:00 +0000

What bank is the money in? I clicked the link but nothing happened.

From agnes@office.example Mon Feb  2 14:00:00 2004
From: Agnes <agnes@office.example>
To: bernard@office.example
Subject: meeting agenda
Date: Mon, 2 Feb 2004 14:00:00 +0000

Agenda for the quarterly meeting: budget review, schedule planning.

From bernard@office.example Tue Feb  3 09:15:00 2004
From: Bernard <bernard@office.example>
To: agnes@office.example
Subject: Re: meeting agenda

Looks good. See the link to the shared schedule. Click through when ready.
`;

export interface TestServer {
  base: string;
  child: ChildProcess;
  stop: () => void;
}

export async function startServer(port: number): Promise<TestServer> {
  const dataDir = mkdtempSync(join(tmpdir(), "mailscope-ui-test-"));
  const child = spawn(
    "python3",
    ["-m", "mailscope.cli", "serve", "--port", String(port), "--data-dir", dataDir],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  let stderr = "";
  child.stderr?.on("data", (chunk) => (stderr += chunk));
  const base = `http://127.0.0.1:${port}`;
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${base}/datasets`);
      if (response.ok) {
        return { base, child, stop: () => child.kill("SIGTERM") };
      }
    } catch {
      // not up yet
    }
    if (child.exitCode !== null) break;
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  child.kill("SIGTERM");
  throw new Error(`service did not come up on :${port}\n${stderr}`);
}

export async function uploadFixture(base: string, label = "fixture"): Promise<string> {
  const form = new FormData();
  form.append("file", new Blob([SAMPLE_MBOX]), "fixture.mbox");
  form.append("format", "mbox");
  form.append("label", label);
  const response = await fetch(`${base}/datasets`, { method: "POST", body: form });
  if (!response.ok) throw new Error(`upload failed: ${await response.text()}`);
  const handle = (await response.json()) as { dataset_id: string };
  return handle.dataset_id;
}

export interface Mounted {
  window: Window;
  root: HTMLElement;
  app: App;
}

export function mountInWindow(apiBase: string): Mounted {
  const window = new Window();
  const doc = window.document as unknown as Document;
  const root = doc.createElement("div");
  root.id = "app";
  doc.body.append(root);
  const app = mountApp(root, apiBase, (...args) => fetch(...args));
  return { window, root, app };
}

/** Wait until the store's mutation queue has settled and listeners ran. */
export async function settle(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
}
