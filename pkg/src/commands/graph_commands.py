"""
Comandos sobre el grafo: caminos zig-zag, polígono de Newton y ejemplos incluidos.
"""

import click

from ..models.data_models import CommandResponse
from ..service_manager import service_manager
from ..utils.exceptions import DimerError
from ..utils.logging import app_logger, error_handler
from ..utils.validators import ValidationError
from .output import emit_response

graph_option = click.option('--graph', 'graph_path', required=True,
                            type=click.Path(dir_okay=False), help='Documento JSON del grafo')


@click.command('zigzag')
@graph_option
@click.pass_context
def zigzag_command(ctx: click.Context, graph_path: str):
    """Caminos zig-zag con sus clases de homología y violaciones de minimalidad"""
    try:
        graph_service = service_manager.graph_service
        g = service_manager.fixture_service.load_graph(graph_path)
        zz = graph_service.zigzag_paths(g)
        violations = graph_service.check_minimality(g, zz)

        app_logger.info(f"{len(zz)} zig-zags en {g.name}")
        response = CommandResponse(success=True, data={
            'graph': g.name,
            'zigzags': [path.to_dict() for path in zz],
            'minimal': not violations,
            'violations': [v.to_dict() for v in violations]
        })

    except ValidationError as e:
        app_logger.warning(f"Error de validación: {str(e)}")
        response = CommandResponse(success=False, error=e.to_dict())

    except DimerError as e:
        error_handler.log_error(e, {'command': 'zigzag'})
        response = CommandResponse(success=False, error=e.to_dict())

    emit_response(ctx, response)


@click.command('newton')
@graph_option
@click.pass_context
def newton_command(ctx: click.Context, graph_path: str):
    """Polígono de Newton, abanico normal y posición fijada por D_N"""
    try:
        g = service_manager.fixture_service.load_graph(graph_path)
        context = service_manager.inverse_service.prepare(g)
        positioned = service_manager.toric_service.positioned_polygon(context.divisor_n, context.polygon)

        response = CommandResponse(success=True, data={
            'graph': g.name,
            'newton': context.polygon.to_dict(),
            'divisor_n': context.divisor_n.to_dict(),
            'positioned': [list(v) for v in positioned.vertices],
            'abel': context.abel.to_dict()
        })

    except ValidationError as e:
        app_logger.warning(f"Error de validación: {str(e)}")
        response = CommandResponse(success=False, error=e.to_dict())

    except DimerError as e:
        error_handler.log_error(e, {'command': 'newton'})
        response = CommandResponse(success=False, error=e.to_dict())

    emit_response(ctx, response)


@click.command('fixtures')
@click.pass_context
def fixtures_command(ctx: click.Context):
    """Lista los ejemplos resueltos incluidos"""
    fixtures = service_manager.fixture_service.list_fixtures()
    emit_response(ctx, CommandResponse(success=True, data={'fixtures': fixtures}))


graph_commands = [zigzag_command, newton_command, fixtures_command]
