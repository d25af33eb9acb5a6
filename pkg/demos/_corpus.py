"""Shared sample corpus for the demo scripts: a small mbox of scam-flavored
and routine office mail, with one undated message and a couple of
multi-recipient ones."""
import tempfile
from pathlib import Path

from mailscope import Store, load_dataset

SAMPLE_MBOX = """\
From prince@lagos-bank.example Mon Mar  3 09:10:00 2003
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

From prince@lagos-bank.example Thu Jun 12 08:00:00 2003
From: Prince Adewale <prince@lagos-bank.example>
To: victim1@home.example
Subject: receipt for the transfer fee
Date: Thu, 12 Jun 2003 08:00:00 +0000

Attached is the receipt. Send the dollars by wire transfer today, the
inventory of goods will be released by the officials.

From agnes@office.example Mon Feb  2 14:00:00 2004
From: Agnes <agnes@office.example>
To: bernard@office.example
Subject: meeting agenda
Date: Mon, 2 Feb 2004 14:00:00 +0000

Agenda for the quarterly meeting: budget review, schedule planning.

From bernard@office.example Tue Feb  3 09:15:00 2004
From: Bernard <bernard@office.example>
To: agnes@office.example
Cc: carla@office.example
Subject: Re: meeting agenda
Date: Tue, 3 Feb 2004 09:15:00 +0000

Looks good. I added the inventory report to the schedule.

From carla@office.example Wed Feb  4 16:45:00 2004
From: carla@office.example
To: agnes@office.example
Subject: minutes from the meeting

Minutes attached. Next meeting scheduled for March.

From prince@lagos-bank.example Fri Jan  7 07:20:00 2005
From: Prince Adewale <prince@lagos-bank.example>
To: victim4@home.example
Subject: your unclaimed money
Date: Fri, 7 Jan 2005 07:20:00 +0000

A dormant account holds money in your name. Urgent reply needed, the bank
will close the account. Click this link.
"""


def build(tmp_dir: str | None = None):
    """Write the sample mbox, ingest it, and return (store, handle, path)."""
    root = Path(tmp_dir or tempfile.mkdtemp(prefix="mailscope-demo-"))
    mbox_path = root / "sample.mbox"
    mbox_path.write_text(SAMPLE_MBOX)
    store = Store(root / "data")
    handle = load_dataset(mbox_path, "mbox", store, label="demo corpus")
    return store, handle, mbox_path
