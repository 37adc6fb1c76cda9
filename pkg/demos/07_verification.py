"""Executable checks of the identities and inequalities the analysis relies on."""

from crestwave import check_identities, check_inequalities

for report in (check_identities(128, 20), check_inequalities(128, 20)):
    print(f"{report.suite}: {'all pass' if report.passed else 'FAILURES'}")
    for rec in report.records:
        print(f"  {'pass' if rec.passed else 'FAIL'} {rec.check_id:30s} {rec.value:.3e}")
