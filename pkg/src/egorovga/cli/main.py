import click
from dotenv import load_dotenv

from src.egorovga.cli.commands import (
    kernel,
    run_scenario,
    show_config,
    show_env_vars,
    verify,
)


@click.group()
def app():
    load_dotenv()


app.add_command(kernel)
app.add_command(run_scenario)
app.add_command(verify)
app.add_command(show_config)
app.add_command(show_env_vars)

if __name__ == "__main__":
    app()
