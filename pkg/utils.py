from argparse import ArgumentParser, ArgumentTypeError

from metric_invariants.utils.constants import (
    DEFAULT_FORMAT,
    DEFAULT_LOGS_PATH,
    DEFAULT_PRIME_COUNT,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    OUTPUT_FORMATS,
)


def parse_signature(text: str) -> tuple[int, int]:
    """'P,M' -> (P, M)."""
    try:
        plus, minus = (int(part) for part in text.split(","))
    except ValueError:
        raise ArgumentTypeError(f"signature must look like P,M, got {text!r}") from None
    return plus, minus


def parse_common_args(parser: ArgumentParser):
    parser.add_argument("--n", type=int, default=None, help="Dimension of the base manifold")
    parser.add_argument("--r", type=int, default=None, help="Jet order of the metric")
    parser.add_argument(
        "--signature",
        type=parse_signature,
        default=None,
        help="Signature as P,M (default: n,0)",
    )
    parser.add_argument(
        "--trials", type=int, default=DEFAULT_TRIALS, help="Number of sampled points"
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="64-bit random seed")
    parser.add_argument(
        "--prime-count",
        type=int,
        default=DEFAULT_PRIME_COUNT,
        help="Primes used per modular rank certificate",
    )
    parser.add_argument(
        "--paranoid",
        action="store_true",
        default=False,
        help="Use three primes and confirm with exact elimination for n <= 3",
    )
    parser.add_argument(
        "--format",
        choices=OUTPUT_FORMATS,
        default=DEFAULT_FORMAT,
        help="Output format",
    )
    parser.add_argument("--out", type=str, default=None, help="Write output to this file")
    parser.add_argument("--point", type=str, default=None, help="JSON metric jet point file")
    parser.add_argument(
        "--flat",
        action="store_true",
        default=False,
        help="Use the flat normal point of the given signature",
    )
    parser.add_argument(
        "--curvature",
        type=str,
        default=None,
        help="JSON curvature tensor file seeding a normal-coordinate point",
    )
    parser.add_argument("--nmax", type=int, default=None, help="Largest dimension for table")
    parser.add_argument("--rmax", type=int, default=None, help="Largest order for table")
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help="Worker processes for table and trial fan-out",
    )
    parser.add_argument(
        "--signature-mix",
        action="store_true",
        default=False,
        help="Certify every table cell at signatures (n, 0) and (n-1, 1)",
    )
    parser.add_argument(
        "--logs-path",
        type=str,
        default=DEFAULT_LOGS_PATH,
        help="Path to save logs",
    )
    parser.add_argument(
        "--minimize-stdout-logs",
        help="Do not echo logs to the terminal.",
        action="store_true",
        default=False,
    )
    return parser
