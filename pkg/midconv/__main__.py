#!/usr/bin/env python3

import sys
if sys.version_info < (3, 9):
    sys.exit('Sorry, you need at least Python 3.9')

import logging
import argparse
import json

from configparser import ConfigParser

from midconv import document
from midconv import fuchsian
from midconv import katz
from midconv import monodromy
from midconv import mult_conv
from midconv import pcurv
from midconv import __version__
from midconv.errors import DocumentError, InconclusiveError, IntegrationError, PreconditionError
from midconv.fields import root_of_unity

__license__ = "MIT"
__doc__ = "Middle convolution of matrix tuples and Fuchsian systems, p-curvature and monodromy checks"

EXIT_PRECONDITION = 1
EXIT_INCONCLUSIVE = 2
EXIT_IO = 3


def read_input(path, *kinds):
    obj = document.read_document(path)
    if not isinstance(obj, kinds):
        raise PreconditionError("{} holds a {}, expected {}".format(
            path, type(obj).__name__, " or ".join(k.__name__ for k in kinds)))
    return obj


def parse_lambda(settings):
    if settings.lambda_mu is not None:
        mu = document.parse_rational(settings.lambda_mu)
        return root_of_unity(mu.numerator, mu.denominator)
    return document.parse_rational(settings.lam)


def conv_mult(settings):
    tuple_ = read_input(settings.infile, mult_conv.MatTuple)
    lam = parse_lambda(settings)
    if not settings.middle:
        result = mult_conv.conv_mult(tuple_, lam)
        document.write_document(result, settings.out)
        document.write_json({'operation': 'conv', 'dim': result.n}, settings.report)
        return 0

    result = mult_conv.mc_mult(tuple_, lam)
    report = {
        'operation': 'middle-conv',
        'dim': result.dim,
        'k_dim': result.K.dim,
        'l_dim': result.L.dim,
    }
    if lam != 1:
        report['formula_dim'] = mult_conv.dim_formula(tuple_, lam)
        report['formula_ok'] = report['formula_dim'] == result.dim
        if not report['formula_ok']:
            logging.warning("dim {} differs from the dimension formula {}".format(result.dim, report['formula_dim']))
    if result.dim == 0:
        logging.warning("Middle convolution is zero dimensional")
    document.write_document(result.quotient, settings.out)
    document.write_json(report, settings.report)
    return 0


def conv_add(settings):
    system = read_input(settings.infile, fuchsian.FuchsianSystem)
    mu = document.parse_rational(settings.mu)
    report = {'operation': 'middle-conv' if settings.middle else 'conv', 'mu': mu}
    if settings.middle:
        result, k_space, l_space = fuchsian.mc_add(system, mu)
        report.update({'dim': result.n, 'k_dim': k_space.dim, 'l_dim': l_space.dim})
        if result.n == 0:
            logging.warning("Middle convolution is zero dimensional")
    else:
        result = fuchsian.conv_add(system, mu)
        report['dim'] = result.n
    report['okubo'] = document.to_document(fuchsian.okubo_of_convolution(system, mu))
    document.write_document(result, settings.out)
    document.write_json(report, settings.report)
    return 0


def construct(settings):
    seed = read_input(settings.seed, fuchsian.FuchsianSystem)
    steps = document.parse_program(document.read_json(settings.program)) if settings.program else []
    system, reports = katz.apply_program(seed, steps, validate=not settings.no_validate)
    if settings.report:
        writer = document.ReportWriter(settings.report)
        for report in reports:
            writer.append(report.as_dict())
    for report in reports:
        for warning in report.warnings:
            logging.warning("Step {}: {}".format(report.index, warning))
    document.write_document(system, settings.out)
    return 0


def pcurvature(settings):
    system = read_input(settings.infile, fuchsian.FuchsianSystem, fuchsian.OkuboSystem)
    mu = None if settings.mu is None else document.parse_rational(settings.mu)
    reports = pcurv.scan(system, settings.pmax, mu)
    for report in reports:
        if report.good and not report.nilpotent:
            logging.warning("p={}: not nilpotent".format(report.prime))
    document.write_json({'reports': [report.as_dict() for report in reports]}, settings.out)
    return 0


def verify_rh(settings):
    system = read_input(settings.infile, fuchsian.FuchsianSystem)
    mu = document.parse_rational(settings.mu)
    cfg = monodromy.LoopConfig(radius_factor=settings.radius_factor, tol=settings.ode_tol)
    report = monodromy.verify_rh(system, mu, cfg, tol=settings.tol, rank_tol=settings.rank_tol)
    document.write_json(report.as_dict(), settings.out)
    if not report.hypotheses_ok:
        logging.error("Hypotheses of the comparison are violated")
        return EXIT_PRECONDITION
    if not report.success:
        logging.error("Inconclusive: best conjugacy residual {:.3g}".format(report.residual))
        return EXIT_INCONCLUSIVE
    logging.info("Monodromy of mc_(mu-1) is conjugate to MC_lambda of the monodromy")
    return 0


def lame(settings):
    roots = [document.parse_rational(t) for t in settings.roots.split(',')]
    equation = fuchsian.LameEquation(document.parse_rational(settings.n), document.parse_rational(settings.B), roots)
    system = fuchsian.lame_system(equation)
    if not fuchsian.lame_gauge_residues(equation):
        logging.warning("Gauge of the companion system does not give the residue form")
    logging.info("l1 = {}, l2 = {}".format(equation.l1(), equation.l2()))
    if settings.mu is None:
        document.write_document(system, settings.out)
        return 0

    extra_points, extra_residues = (), ()
    if settings.extra:
        extra = read_input(settings.extra, fuchsian.FuchsianSystem)
        extra_points, extra_residues = extra.points, extra.residues
    okubo = fuchsian.lame_okubo(equation, extra_points, extra_residues, document.parse_rational(settings.mu))
    if settings.out:
        document.write_document(system, settings.out)
    document.write_document(okubo, settings.okubo_out)
    return 0


def build_parser(conf_parser, defaults):
    parser = argparse.ArgumentParser(
        description=__doc__,
        parents=[conf_parser],
    )
    parser.add_argument("--log", help="Set log level (default info)", choices=['debug', 'info', 'warning', 'critical'])
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.set_defaults(**defaults)
    # subcommand defaults would shadow a --log given before the command
    defaults = {key: value for key, value in defaults.items() if key != 'log'}
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    sub = commands.add_parser('conv-mult', help="Convolution C_lambda or middle convolution MC_lambda of a tuple")
    sub.add_argument("--in", dest='infile', help="mat-tuple document", metavar='FILE', required=True)
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--lambda-mu", help="lambda = exp(2 pi i n1/n2)", metavar='N1/N2')
    group.add_argument("--lambda", dest='lam', help="rational lambda", metavar='RATIONAL')
    sub.add_argument("--middle", help="Take the middle convolution", action='store_true')
    sub.add_argument("--out", help="Output document (default standard output)", metavar='FILE')
    sub.add_argument("--report", help="Report file (default standard output)", metavar='FILE')
    sub.set_defaults(func=conv_mult, **defaults)

    sub = commands.add_parser('conv-add', help="Convolution c_mu or middle convolution mc_mu of a Fuchsian system")
    sub.add_argument("--in", dest='infile', help="fuchsian document", metavar='FILE', required=True)
    sub.add_argument("--mu", help="Convolution parameter", metavar='P/Q', required=True)
    sub.add_argument("--middle", help="Take the middle convolution", action='store_true')
    sub.add_argument("--out", help="Output document (default standard output)", metavar='FILE')
    sub.add_argument("--report", help="Report file (default standard output)", metavar='FILE')
    sub.set_defaults(func=conv_add, **defaults)

    sub = commands.add_parser('construct', help="Apply a program of scalar additions and middle convolutions")
    sub.add_argument("--seed", help="1x1 fuchsian document", metavar='FILE', required=True)
    sub.add_argument("--program", help="JSON list of steps", metavar='FILE')
    sub.add_argument("--out", help="Output document (default standard output)", metavar='FILE')
    sub.add_argument("--report", help="Per-step reports as JSON lines, DATE in the name will be replaced by the current date", metavar='FILE')
    sub.add_argument("--no-validate", help="Skip the seed checks", action='store_true')
    sub.set_defaults(func=construct, **defaults)

    sub = commands.add_parser('pcurvature', help="Scan p-curvature nilpotence over primes")
    sub.add_argument("--in", dest='infile', help="fuchsian or okubo document", metavar='FILE', required=True)
    sub.add_argument("--mu", help="Also scan c_mu and mc_mu of a Fuchsian system", metavar='P/Q')
    sub.add_argument("--pmax", help="Largest prime (default 50)", type=int)
    sub.add_argument("--out", help="Report file (default standard output)", metavar='FILE')
    sub.set_defaults(func=pcurvature, **dict({'pmax': '50'}, **defaults))

    sub = commands.add_parser('verify-rh', help="Compare MC_lambda of the monodromy with the monodromy of mc_(mu-1)")
    sub.add_argument("--in", dest='infile', help="fuchsian document", metavar='FILE', required=True)
    sub.add_argument("--mu", help="lambda = exp(2 pi i mu), mu not an integer", metavar='P/Q', required=True)
    sub.add_argument("--tol", help="Conjugacy residual tolerance (default 1e-6)", type=float)
    sub.add_argument("--ode-tol", help="Integrator tolerance (default 1e-10)", type=float)
    sub.add_argument("--rank-tol", help="Relative singular value threshold (default 1e-8)", type=float)
    sub.add_argument("--radius-factor", help="Loop radius relative to the nearest singular point (default 0.4)", type=float)
    sub.add_argument("--out", help="Report file (default standard output)", metavar='FILE')
    sub.set_defaults(func=verify_rh, **dict({'tol': '1e-6', 'ode_tol': '1e-10', 'rank_tol': '1e-8',
                                            'radius_factor': '0.4'}, **defaults))

    sub = commands.add_parser('lame', help="Lame system and the Okubo system of its middle convolution")
    sub.add_argument("--n", help="Lame index", metavar='P/Q', required=True)
    sub.add_argument("--B", help="Accessory parameter", metavar='P/Q', required=True)
    sub.add_argument("--roots", help="Roots of p(x)/4", metavar='T1,T2,T3', required=True)
    sub.add_argument("--extra", help="fuchsian document with further 2x2 residues", metavar='FILE')
    sub.add_argument("--mu", help="Convolution parameter", metavar='P/Q')
    sub.add_argument("--out", help="Lame system document", metavar='FILE')
    sub.add_argument("--okubo-out", help="Okubo system document (default standard output)", metavar='FILE')
    sub.set_defaults(func=lame, **defaults)
    return parser


def run(argv=None):
    defaults = {
        'log': "info"
    }

    # Parse any config file specification. We make this parser with add_help=False so
    # that it doesn't parse -h and print help.
    conf_parser = argparse.ArgumentParser(
        formatter_class=argparse.RawDescriptionHelpFormatter,
        add_help=False
    )
    conf_parser.add_argument("--config", help="Specify config file", metavar='FILE')
    args, remaining_argv = conf_parser.parse_known_args(argv)

    # Read configuration file and add it to the defaults hash.
    if args.config:
        config = ConfigParser()
        config.read(args.config)
        if "Defaults" in config:
            defaults.update({key.replace('-', '_'): value for key, value in config.items("Defaults")})
        else:
            logging.error("Bad config file, missing Defaults section")
            sys.exit(EXIT_PRECONDITION)

    args = build_parser(conf_parser, defaults).parse_args(argv)

    # Configure the logging
    numeric_level = getattr(logging, args.log.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError('Invalid log level: %s' % args.log)
    logging.basicConfig(format='%(levelname)-8s %(message)s', level=numeric_level)

    logging.debug("midconv version " + __version__)

    try:
        code = args.func(args)
    except KeyboardInterrupt:
        sys.exit(1)
    except PreconditionError as exp:
        logging.error(exp)
        sys.exit(EXIT_PRECONDITION)
    except (InconclusiveError, IntegrationError) as exp:
        logging.error(exp)
        sys.exit(EXIT_INCONCLUSIVE)
    except (DocumentError, OSError, json.JSONDecodeError) as exp:
        logging.error(exp)
        sys.exit(EXIT_IO)
    sys.exit(code)


if __name__ == "__main__":
    run()
