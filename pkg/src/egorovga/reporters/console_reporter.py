from rich.console import Console
from rich.table import Table

from .base import BaseReporter, clause_results


class ConsoleReporter(BaseReporter):

    def __init__(self, verbose: bool = False, console: Console = None):
        self.verbose = verbose
        self.console = console or Console()

    def report_single(self, result):
        self.console.print(f"[bold green]Check:[/bold green] {result.check_name}")
        self.console.print(self._clause_table(clause_results([result])))
        self._display_issues(clause_results([result]))

    def report_batch(self, report):
        clauses = clause_results(report.results)
        self.console.print(f"[bold blue]Scenario:[/bold blue] {report.scenario}")
        self.console.print(self._clause_table(clauses))
        self._display_issues(clauses)
        colour = "green" if report.summary.all_passed else "red"
        self.console.print(
            f"[bold {colour}]{report.summary.passed_checks} of {report.summary.total_checks} checks passed[/bold {colour}]"
        )

    def _clause_table(self, clauses) -> Table:
        table = Table(show_header=True, header_style="bold cyan")
        table.add_column("Clause")
        table.add_column("Status")
        table.add_column("Expected")
        table.add_column("max_err", justify="right")
        for result in clauses:
            status = "[green]PASS[/green]" if result.passed else "[red]FAIL[/red]"
            max_error = "" if result.max_error is None else f"{result.max_error:.1e}"
            table.add_row(result.clause, status, result.expected_outcome or "", max_error)
        return table

    def _display_issues(self, clauses):
        issues = [(result.clause, issue) for result in clauses for issue in result.issues]
        if issues and (self.verbose or any(not result.passed for result in clauses)):
            self.console.print("\n[bold yellow]Issues Found:[/bold yellow]")
            for clause, issue in issues:
                self.console.print(f"  • {clause}: {issue}")
        if self.verbose:
            self._display_check_details(clauses)

    def _display_check_details(self, clauses):
        self.console.print("\n[bold cyan]Check Details:[/bold cyan]")
        for result in clauses:
            if not result.details:
                continue
            self.console.print(f"  {result.clause}:")
            for key, value in sorted(result.details.items()):
                self.console.print(f"    {key}: {value}")
