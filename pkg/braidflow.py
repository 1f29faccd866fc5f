#!/usr/bin/env python
"""
braidflow command-line entry point.

    braidflow <subcommand> [options]

Exit codes: 0 success, 1 domain error, 2 usage error.
"""
import os
import sys
from typing import Optional, Sequence

SUBCOMMANDS = {
    'link': ('apps.geometry', 'Build or describe a link layout and its stability threshold'),
    'hofer': ('apps.hamiltonian', 'Hofer norm interval of a Hamiltonian'),
    'flow': ('apps.flow', 'Integrate strands, check link preservation, dump CSV'),
    'braid': ('apps.braid', 'Compare, normalize or extract braid words'),
    'algebra': ('apps.floer_algebra', 'Filtered complexes, window homology, morphism checks'),
    'stability': ('apps.stability', 'Braid-type stability harness'),
    'render': ('apps.braid', 'SVG braid diagrams'),
}


def usage() -> str:
    width = max(len(name) for name in SUBCOMMANDS)
    lines = ['usage: braidflow <subcommand> [options]', '', 'subcommands:']
    lines += [f'  {name:<{width}}  {text}' for name, (_, text) in SUBCOMMANDS.items()]
    lines += ['', "Run 'braidflow <subcommand> --help' for the options of one subcommand."]
    return '\n'.join(lines)


def setup():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    import django

    django.setup()


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in SUBCOMMANDS:
        if argv and argv[0] not in ('-h', '--help'):
            sys.stderr.write(f'braidflow: unknown subcommand {argv[0]!r}\n')
        sys.stderr.write(usage() + '\n')
        return 0 if argv and argv[0] in ('-h', '--help') else 2

    setup()
    from django.core.management import load_command_class

    name = argv[0]
    command = load_command_class(SUBCOMMANDS[name][0], name)
    try:
        command.run_from_argv(['braidflow', name, *argv[1:]])
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
