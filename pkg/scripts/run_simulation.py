#!/usr/bin/env python3
"""Latency-model experiment: per-feature savings under the default profile.

Costs a representative audit (remote-reference checks through 1..3
intermediate sheets, scan regions of several lengths, blank-gap skips) for
both technologies and prints the per-task and total savings, plus the
sensitivity of scan savings to a non-zero stop-recognition latency.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gridpilot.simulate import (
    AuditScript,
    CheckRemoteRef,
    LatencyProfile,
    ScanRange,
    SkipBlanks,
    simulate,
)


def main() -> None:
    script = AuditScript(
        [
            CheckRemoteRef(1),
            CheckRemoteRef(2),
            CheckRemoteRef(3),
            ScanRange(5),
            ScanRange(10),
            ScanRange(25),
            SkipBlanks(2),
            SkipBlanks(6),
        ]
    )
    print("default profile")
    print(simulate(script).to_text())

    print("\nwith a 2 s stop-recognition overshoot charged to scans")
    overshoot = LatencyProfile(stop_latency_s=2.0)
    report = simulate(script, overshoot)
    print(report.to_text())

    row10 = simulate(AuditScript([ScanRange(10)])).rows[0]
    ratio = row10.baseline_s / row10.ivoice_s
    print(f"\nper-cell scan ratio at defaults: {ratio:.2f} (observed band 2.70-3.14)")


if __name__ == "__main__":
    main()
