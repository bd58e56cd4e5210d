"""
LOCC 검증 명령줄 도구

예:
    locc-verify check-copiable --dim 3 --indices 0,0 1,0 2,0
    locc-verify simulate-copy --dim 5 --indices 0,0 1,0 2,0 3,0 4,0 --blank 0,1
    locc-verify search --dim 2 --max-size 3 --json-out search.json
"""
import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger

from config.settings import DEFAULT_ATTEMPTS, DEFAULT_SEED, DEFAULT_TOL, MAX_SEARCH_DIM
from src.copying.classify import (
    Caveat,
    classify_copiable,
    lemma1_property_suite,
    ssd_canonical,
    ssd_general,
    verify_lemma1,
    xi_to_lemma_tensor,
)
from src.copying.copy_engine import (
    CopiedSet,
    XiTensor,
    build_copier,
    check_copier_condition,
    copy_fidelities,
    find_blank,
    reduce_to_fundamental,
    solve_copier,
)
from src.copying.search import search_copiable_sets
from src.core.tensor_core import BipartiteState, ComplexMatrix, as_matrix, max_abs
from src.core.weyl_basis import BellIndex, bell_set, bell_state, state_from_unitary
from src.discrimination.discriminate import (
    CONVENTIONS,
    SeparablePovm,
    povm_bound_check,
    random_separable_povm,
    simulate_discrimination,
)
from src.utils.errors import InputError, LoccError
from src.utils.logger import setup_logger

VERDICTS = ("pass", "fail", "no-witness", "unproven-regime")
EXIT_CODES = {"pass": 0, "unproven-regime": 0, "fail": 1, "no-witness": 1}
EXIT_USAGE = 2


@dataclass
class RunReport:
    """명령 실행 결과 (JSON 직렬화 대상)"""

    command: str
    verdict: str
    residuals: Dict[str, float] = field(default_factory=dict)
    witnesses: Optional[Dict[str, Any]] = None
    caveats: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"알 수 없는 판정입니다: {self.verdict}")

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, ensure_ascii=False)


def matrix_to_document(m: ComplexMatrix) -> Dict[str, Any]:
    """행 우선 [re, im] 쌍의 MatrixDocument"""
    m = as_matrix(m)
    return {"dims": list(m.shape), "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)]}


def matrix_from_document(doc: Any) -> ComplexMatrix:
    """
    MatrixDocument -> 행렬

    Raises:
        InputError: 형식 오류, 길이 불일치, 유한하지 않은 값
    """
    try:
        rows, cols = (int(v) for v in doc["dims"])
        data = np.asarray(doc["data"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"MatrixDocument 형식 오류: {e}")
    if rows < 1 or cols < 1 or data.shape != (rows * cols, 2):
        raise InputError(f"data 길이 {data.shape} 가 dims [{rows}, {cols}] 와 맞지 않습니다.")
    if not np.all(np.isfinite(data)):
        raise InputError("MatrixDocument 에 유한하지 않은 값이 있습니다.")
    return (data[:, 0] + 1j * data[:, 1]).reshape(rows, cols)


def load_matrices(path: str) -> List[ComplexMatrix]:
    """MatrixDocument, 그 리스트, 또는 witnesses.copier 를 가진 RunReport 를 읽음"""
    try:
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"행렬 파일을 읽을 수 없습니다 ({path}): {e}")
    if isinstance(payload, dict) and "witnesses" in payload:
        payload = (payload.get("witnesses") or {}).get("copier")
        if payload is None:
            raise InputError(f"RunReport 에 copier 가 없습니다: {path}")
    docs = payload if isinstance(payload, list) else [payload]
    return [matrix_from_document(doc) for doc in docs]


def _parse_indices(texts: List[str], dim: int) -> List[BellIndex]:
    try:
        return [BellIndex.parse(text, dim) for text in texts]
    except LoccError as e:
        raise InputError(str(e))


def _require_dim(args: argparse.Namespace) -> int:
    if args.dim is None:
        raise InputError("--dim 이 필요합니다.")
    if args.dim < 2:
        raise InputError(f"--dim 은 2 이상이어야 합니다: {args.dim}")
    return args.dim


def _copied_set(args: argparse.Namespace) -> CopiedSet:
    """--indices 또는 --matrix 로 주어진 복사 집합"""
    if bool(args.indices) == bool(args.matrix):
        raise InputError("--indices 와 --matrix 중 하나만 지정해야 합니다.")
    if args.indices:
        dim = _require_dim(args)
        try:
            return bell_set(_parse_indices(args.indices, dim))
        except LoccError as e:
            raise InputError(str(e))
    unitaries = [m for path in args.matrix for m in load_matrices(path)]
    dim = args.dim if args.dim is not None else unitaries[0].shape[0]
    try:
        return CopiedSet(dim, tuple(unitaries))
    except LoccError as e:
        raise InputError(str(e))


def _caveat_verdict(passed: bool, unproven: bool) -> str:
    if not passed:
        return "fail"
    return "unproven-regime" if unproven else "pass"


def cmd_check_copiable(args: argparse.Namespace) -> RunReport:
    """분류기와 복사기 탐색의 두 판정과 일치 여부"""
    copied_set = _copied_set(args)
    verdict = classify_copiable(copied_set, args.tol, seed=args.seed)
    search = solve_copier(copied_set, args.tol, attempts=args.attempts, seed=args.seed)

    caveats = []
    if verdict.caveat is Caveat.COMPOSITE_DIM_UNPROVEN or search.unproven_regime:
        caveats.append(Caveat.COMPOSITE_DIM_UNPROVEN.value)
    agree = verdict.copiable == search.success
    if not agree:
        caveats.append("cross-check disagreement")
    if not verdict.copiable and verdict.reason:
        caveats.append(verdict.reason)

    residuals: Dict[str, float] = {"nullspace_dim": float(search.nullspace_dim)}
    witnesses: Dict[str, Any] = {
        "classify": verdict.copiable,
        "solve_copier": search.success,
        "exponents": list(verdict.exponents) if verdict.exponents is not None else None,
    }
    if search.certificate is not None:
        residuals["copier"] = search.certificate.residual
        witnesses["copier"] = matrix_to_document(search.certificate.a)
        witnesses["fitted_phases"] = list(search.certificate.fitted_phases)
    unproven = Caveat.COMPOSITE_DIM_UNPROVEN.value in caveats
    return RunReport(
        "check-copiable",
        _caveat_verdict(verdict.copiable and agree, unproven),
        residuals,
        witnesses,
        caveats,
    )


def cmd_simulate_copy(args: argparse.Namespace) -> RunReport:
    """
    주어진 (또는 xi 로 합성한) 복사기로 복사 프로토콜 시뮬레이션

    --copier 로 받은 복사기는 check-copiable 이 인증한 것과 같은 기본형 집합 {U_j U_0^dagger} 에 적용한다.
    Alice 가 먼저 자기 쪽에 U_0^dagger 를 거는 국소 연산이므로 복사 충실도는 바뀌지 않는다.
    """
    copied_set = _copied_set(args)
    dim = copied_set.dim
    caveats = []
    if args.copier:
        a = load_matrices(args.copier)[0]
        if max_abs(copied_set.unitaries[0] - np.eye(dim)) > args.tol:
            caveats.append("copier applied to the fundamental form (U_0^dagger applied locally by Alice)")
        copied_set = reduce_to_fundamental(copied_set)
    else:
        xi = XiTensor.fourier(dim) if args.xi == "fourier" else XiTensor.delta(dim)
        a = build_copier(dim, xi, args.tol)

    try:
        cert = check_copier_condition(a, copied_set, args.tol, search_blank=False)
    except LoccError as e:
        raise InputError(str(e))

    if args.blank:
        blank: Optional[BipartiteState] = bell_state(_parse_indices([args.blank], dim)[0])
    elif args.copier:
        blank = find_blank(a, copied_set, args.tol)
    else:
        blank = bell_state(BellIndex(0, 0, dim))

    if blank is None:
        caveats.append("no blank state found for the supplied copier")
        return RunReport("simulate-copy", "fail", {"copier": cert.residual}, None, caveats)

    fidelities = copy_fidelities(a, blank, copied_set)
    passed = min(fidelities) >= 1 - args.tol
    return RunReport(
        "simulate-copy",
        "pass" if passed else "fail",
        {"copier": cert.residual, "min_fidelity": min(fidelities)},
        {"fidelities": fidelities, "copier": matrix_to_document(a)},
        caveats,
    )


def cmd_check_ssd(args: argparse.Namespace) -> RunReport:
    """정준 인덱스면 (p, q, r) 탐색, 행렬이면 일반 틀 탐색"""
    if args.indices:
        dim = _require_dim(args)
        indices = _parse_indices(args.indices, dim)
        try:
            witness = ssd_canonical(indices, dim, args.tol)
        except LoccError as e:
            raise InputError(str(e))
    elif args.matrix:
        unitaries = [m for path in args.matrix for m in load_matrices(path)]
        dim = args.dim if args.dim is not None else unitaries[0].shape[0]
        try:
            states = [state_from_unitary(u, dim) for u in unitaries]
        except LoccError as e:
            raise InputError(str(e))
        witness = ssd_general(states, args.tol)
    else:
        raise InputError("--indices 또는 --matrix 가 필요합니다.")

    if witness is None:
        return RunReport("check-ssd", "no-witness")
    payload: Dict[str, Any] = {
        "pqr": list(witness.triple) if witness.triple is not None else None,
        "powers": list(witness.powers) if witness.powers is not None else None,
        "basis_a": matrix_to_document(witness.basis_a),
        "basis_b": matrix_to_document(witness.basis_b),
    }
    return RunReport("check-ssd", "pass", {}, payload)


def cmd_discriminate(args: argparse.Namespace) -> RunReport:
    """SSD 정준 집합의 단방향 판별"""
    dim = _require_dim(args)
    if not args.indices:
        raise InputError("--indices 가 필요합니다.")
    indices = _parse_indices(args.indices, dim)
    try:
        witness = ssd_canonical(indices, dim, args.tol)
    except LoccError as e:
        raise InputError(str(e))
    if witness is None:
        return RunReport("discriminate", "no-witness", caveats=["set is not simultaneously Schmidt decomposable"])

    result = simulate_discrimination(indices, dim, args.tol, args.convention)
    channel = result.channel
    error = max_abs(result.success - np.eye(len(indices)))
    sigma = max(max_abs(t.rho_a - np.eye(dim) / dim) for t in result.transfers)
    caveats = []
    if channel.flagged(max(args.tol, 10 * DEFAULT_TOL)):
        caveats.append(f"{channel.convention} convention: sum of P_k differs from identity")
    return RunReport(
        "discriminate",
        "pass" if error <= args.tol else "fail",
        {
            "success_error": error,
            "kraus": channel.kraus_residual,
            "resolution": channel.resolution_residual,
            "sigma_a": sigma,
        },
        {"success": result.success.tolist(), "pqr": list(witness.triple) if witness.triple else None},
        caveats,
    )


def cmd_verify_lemma1(args: argparse.Namespace) -> RunReport:
    """무작위 검증 묶음과 u_a = omega^{n a} 구성 가족"""
    dim = _require_dim(args)
    rng = np.random.default_rng(args.seed)
    suite = lemma1_property_suite(dim, args.trials, rng, tol=args.tol)

    xi = XiTensor.fourier(dim) if args.xi == "fourier" else XiTensor.delta(dim)
    xi_tensor = xi_to_lemma_tensor(xi)
    family_ok = True
    for n in range(dim):
        u = np.diag(np.exp(2j * np.pi * n * np.arange(dim) / dim))
        report = verify_lemma1(u, xi_tensor, args.tol)
        family_ok = family_ok and report.satisfies and report.diagonal

    witnesses: Dict[str, Any] = {
        "trials": suite.trials,
        "satisfied": suite.satisfied,
        "relaxed_solutions": suite.relaxed_solutions,
        "constructive_family": family_ok,
    }
    passed = suite.counterexamples == 0 and family_ok
    if args.matrix:
        u = load_matrices(args.matrix[0])[0]
        try:
            report = verify_lemma1(u, xi_tensor, args.tol)
        except LoccError as e:
            raise InputError(str(e))
        witnesses["input"] = {
            "satisfies": report.satisfies,
            "diagonal": report.diagonal,
            "vacuous": report.vacuous,
        }
        passed = passed and report.consistent
    return RunReport(
        "verify-lemma1",
        "pass" if passed else "fail",
        {"counterexamples": float(suite.counterexamples)},
        witnesses,
    )


def cmd_povm_bound(args: argparse.Namespace) -> RunReport:
    """<Psi|M|Psi> <= Tr(M)/D 검사"""
    dim = _require_dim(args)
    indices = _parse_indices(args.indices or ["0,0"], dim)
    states = [bell_state(idx) for idx in indices]
    rng = np.random.default_rng(args.seed)

    if args.povm == "identity":
        povms = [SeparablePovm.identity(dim)]
    elif args.povm == "computational":
        povms = [SeparablePovm.computational(dim)]
    else:
        povms = [
            random_separable_povm(dim, 50, int(rng.integers(1, dim * dim + 1)), rng)
            for _ in range(args.trials)
        ]

    reports = [povm_bound_check(povm, states, args.tol) for povm in povms]
    min_slack = min(r.min_slack for r in reports)
    violations = sum(r.violations for r in reports)
    size_ok = all(r.size_bound_holds for r in reports)
    return RunReport(
        "povm-bound",
        "pass" if violations == 0 and size_ok else "fail",
        {"min_slack": min_slack},
        {"povms": len(povms), "violations": violations, "slack": reports[0].slack.tolist()},
    )


def cmd_search(args: argparse.Namespace) -> RunReport:
    """정준 Bell 부분집합 전수 탐색"""
    dim = _require_dim(args)
    if dim > MAX_SEARCH_DIM:
        raise InputError(f"search 는 --dim <= {MAX_SEARCH_DIM} 만 지원합니다.")
    max_size = args.max_size if args.max_size is not None else dim + 1
    if max_size < 1 or max_size > dim + 1:
        raise InputError(f"--max-size 는 1..{dim + 1} 이어야 합니다.")

    result = search_copiable_sets(
        dim, max_size, args.tol, seed=args.seed, attempts=args.attempts, workers=args.workers
    )
    disagreements = result.disagreements
    passed = not disagreements and result.max_copiable_size <= dim
    return RunReport(
        "search",
        "pass" if passed else "fail",
        {"disagreements": float(len(disagreements))},
        {
            "max_copiable_size": result.max_copiable_size,
            "copiable_sets": [[idx.label() for idx in s] for s in result.copiable_sets],
        },
    )


COMMANDS = {
    "check-copiable": cmd_check_copiable,
    "simulate-copy": cmd_simulate_copy,
    "check-ssd": cmd_check_ssd,
    "discriminate": cmd_discriminate,
    "verify-lemma1": cmd_verify_lemma1,
    "povm-bound": cmd_povm_bound,
    "search": cmd_search,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, help="국소 차원 D")
    common.add_argument("--indices", nargs="+", metavar="n,m", help="정준 Bell 인덱스")
    common.add_argument("--matrix", action="append", metavar="PATH", help="MatrixDocument JSON (반복 가능)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--json-out", metavar="PATH", help="RunReport 저장 경로")
    common.add_argument("--log-level", default="WARNING")

    parser = argparse.ArgumentParser(prog="locc-verify", description="LOCC 복사 / 판별 검증 도구")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-copiable", parents=[common])
    p.add_argument("--attempts", type=int, default=DEFAULT_ATTEMPTS)

    p = sub.add_parser("simulate-copy", parents=[common])
    p.add_argument("--copier", metavar="PATH", help="복사기 MatrixDocument 또는 RunReport")
    p.add_argument("--xi", choices=["delta", "fourier"], default="delta")
    p.add_argument("--blank", metavar="n,m")

    sub.add_parser("check-ssd", parents=[common])

    p = sub.add_parser("discriminate", parents=[common])
    p.add_argument("--convention", choices=CONVENTIONS, default="conjugated-bra")

    p = sub.add_parser("verify-lemma1", parents=[common])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--xi", choices=["delta", "fourier"], default="delta")

    p = sub.add_parser("povm-bound", parents=[common])
    p.add_argument("--povm", choices=["identity", "computational", "random"], default="identity")
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("search", parents=[common])
    p.add_argument("--max-size", type=int)
    p.add_argument("--attempts", type=int, default=DEFAULT_ATTEMPTS)
    p.add_argument("--workers", type=int, default=1)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0

    setup_logger(level=args.log_level)
    try:
        if args.tol < 0:
            raise InputError(f"--tol 은 0 이상이어야 합니다: {args.tol}")
        report = COMMANDS[args.command](args)
    except LoccError as e:
        logger.error(f"{args.command} 실행 실패: {str(e)}")
        return EXIT_USAGE

    output = report.to_json()
    print(output)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as f:
            f.write(output)
    logger.info(f"{report.command}: {report.verdict}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
