import logging

import click
from dotenv import load_dotenv

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('Workbench')

# Load environment variables
load_dotenv()

COMMAND_MODULES = [
    'commands.syntax',
    'commands.encoding',
    'commands.equivalence',
    'commands.patterns',
    'commands.admin',
]


@click.group('workbench')
@click.option('--verbose', is_flag=True, help="Log at DEBUG level.")
@click.option('--quiet', is_flag=True, help="Log warnings and errors only.")
def cli(verbose, quiet):
    """Process-calculus workbench for π, CMV+ and CMV."""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif quiet:
        logging.getLogger().setLevel(logging.WARNING)


def load_commands(group):
    """Register the commands of every module in COMMAND_MODULES."""
    import importlib

    for name in COMMAND_MODULES:
        module = importlib.import_module(name)
        module.setup(group)
        logger.debug(f"Loaded command module: {name}")


load_commands(cli)


if __name__ == '__main__':
    cli()
