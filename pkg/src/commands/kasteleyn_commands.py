"""
Comando de Kasteleyn: signos, cociclo, matriz K, P y Casimires.
"""

from typing import Optional

import click

from ..models.data_models import CommandResponse, WeightClass
from ..service_manager import service_manager
from ..utils.exceptions import DimerError
from ..utils.logging import app_logger, error_handler
from ..utils.validators import ValidationError
from .graph_commands import graph_option
from .output import emit_response


@click.command('kasteleyn')
@graph_option
@click.option('--weights', 'weights_path', type=click.Path(dir_okay=False), default=None,
              help='Documento JSON de pesos; sin él se usa la clase trivial')
@click.pass_context
def kasteleyn_command(ctx: click.Context, graph_path: str, weights_path: Optional[str]):
    """Matriz de Kasteleyn y polinomio característico normalizado"""
    try:
        fixtures = service_manager.fixture_service
        kasteleyn = service_manager.kasteleyn_service
        g = fixtures.load_graph(graph_path)

        if weights_path:
            wc = fixtures.parse_weights(g, weights_path, ctx.obj.get('mode'))
        else:
            scalar_field = fixtures.field_for(ctx.obj.get('mode'))
            one = scalar_field.coerce(1)
            wc = WeightClass(faces={f: one for f in g.faces if f != g.root_face}, A=one, B=one,
                             field=scalar_field)

        eps = kasteleyn.kasteleyn_sign(g)
        wt = kasteleyn.weight_cocycle(g, wc)
        K = kasteleyn.kasteleyn_matrix(g, wt, eps)
        det_k = kasteleyn.determinant(K, g.name)
        m0 = service_manager.graph_service.reference_matching(g)
        P = kasteleyn.characteristic_polynomial(g, K, m0, wt, eps, det_k=det_k)
        zz = service_manager.graph_service.zigzag_paths(g)

        app_logger.info(f"P de {g.name} con {len(P.terms)} monomios")
        response = CommandResponse(success=True, data={
            'graph': g.name,
            'mode': wc.field.name,
            'signs': eps.to_dict(),
            'cocycle': wt.to_dict(),
            'matrix': {
                w: {b: K[i][j].to_dict() for j, b in enumerate(g.blacks) if not K[i][j].is_zero()}
                for i, w in enumerate(g.whites)
            },
            'det': det_k.to_dict(),
            'P': P.to_dict(),
            'reference_matching': list(m0.edges),
            'casimirs': kasteleyn.casimirs(g, wt, eps, zz).to_dict()
        })

    except ValidationError as e:
        app_logger.warning(f"Error de validación: {str(e)}")
        response = CommandResponse(success=False, error=e.to_dict())

    except DimerError as e:
        error_handler.log_error(e, {'command': 'kasteleyn'})
        response = CommandResponse(success=False, error=e.to_dict())

    emit_response(ctx, response)


kasteleyn_commands = [kasteleyn_command]
