"""
Salida de los comandos: documento JSON ordenado en stdout (o en -o) y código de salida.
"""

import click

from ..models.data_models import CommandResponse
from ..service_manager import service_manager


def emit_response(ctx: click.Context, response: CommandResponse) -> None:
    """Escribe la respuesta y termina con 0, 1 (error de dominio) o 2 (error de validación)"""
    output = ctx.obj.get('output') if ctx.obj else None
    document = response.to_dict()
    if response.success and output:
        service_manager.fixture_service.dump_json(document, output)
    else:
        click.echo(service_manager.fixture_service.dump_json(document))
    ctx.exit(response.exit_code)
