"""Command-line entry points: serve, validate-catalog, export, list-sessions."""
from __future__ import annotations

import json

import click

from .catalog import load_catalog, load_default_catalog
from .errors import CatalogError
from .store import SessionStore, canonical_json


@click.group()
def main() -> None:
    """Self-hosted needs-assessment interview service."""


@main.command()
@click.option("--host", default=None, help="Override the DT_BIND host.")
@click.option("--port", default=None, type=int, help="Override the DT_BIND port.")
def serve(host: str | None, port: int | None) -> None:
    """Run the HTTP service (configuration comes from environment variables)."""
    import uvicorn

    from .service import ServiceConfig, create_app

    try:
        config = ServiceConfig.from_env()
    except ValueError as exc:
        raise click.ClickException(str(exc))
    app = create_app(config)
    uvicorn.run(app, host=host or config.host, port=port or config.port)


@main.command("validate-catalog")
@click.argument("path", required=False, type=click.Path(exists=True, dir_okay=False))
def validate_catalog(path: str | None) -> None:
    """Validate a question catalog file (the shipped default when PATH is omitted)."""
    try:
        catalog = load_catalog(path) if path else load_default_catalog()
    except CatalogError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"catalog version {catalog.version}: {len(catalog.categories)} categories")
    for category in catalog.categories:
        click.echo(f"  {category.id}: {category.question_count()} questions ({category.display_name})")
    click.echo(f"total questions: {catalog.total_questions()}")
    click.echo("catalog OK")


@main.command()
@click.option("--session", "session_id", required=True, help="Session id to export.")
@click.option("--format", "fmt", type=click.Choice(["md", "json"]), default="md",
              show_default=True, help="Output format.")
@click.option("--data-dir", envvar="DT_DATA_DIR", default="./dt-data",
              show_default=True, help="Session data directory.")
def export(session_id: str, fmt: str, data_dir: str) -> None:
    """Print a generated report to stdout as markdown or JSON."""
    store = SessionStore(data_dir)
    doc = store.load_report(session_id)
    if doc is None:
        raise click.ClickException(
            f"no report found for session {session_id!r}; generate one first"
        )
    if fmt == "md":
        click.echo(doc["markdown"], nl=False)
    else:
        click.echo(canonical_json(doc["report"]), nl=False)


@main.command("list-sessions")
@click.option("--data-dir", envvar="DT_DATA_DIR", default="./dt-data",
              show_default=True, help="Session data directory.")
@click.option("--company", default=None, help="Filter by exact company name.")
@click.option("--client", default=None, help="Filter by exact client name.")
@click.option("--job-title", default=None, help="Filter by exact job title.")
@click.option("--status", default=None, type=click.Choice(["active", "completed"]),
              help="Filter by status.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of a table.")
def list_sessions(data_dir: str, company: str | None, client: str | None,
                  job_title: str | None, status: str | None, as_json: bool) -> None:
    """List stored sessions, newest first."""
    store = SessionStore(data_dir)
    sessions = store.list_sessions(
        company=company, client=client, job_title=job_title, status=status,
    )
    if as_json:
        rows = [
            {
                "session_id": s.session_id,
                "company_name": s.profile.company_name,
                "client_name": s.profile.client_name,
                "job_title": s.profile.job_title,
                "status": s.status,
                "updated_at": s.updated_at,
            }
            for s in sessions
        ]
        click.echo(json.dumps(rows, ensure_ascii=False, indent=2))
        return
    if not sessions:
        click.echo("no sessions")
        return
    for s in sessions:
        click.echo(
            f"{s.session_id}  {s.status:<9}  {s.updated_at}  "
            f"{s.profile.company_name} / {s.profile.client_name} ({s.profile.job_title})"
        )
