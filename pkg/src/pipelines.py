"""
Verification Pipelines

PipelineRunner turns a RunConfig into a Report, one method per subcommand.
run() adds timing, the result cache and the mapping of library errors to
report statuses:
- InvalidConfigError / ValueError → invalid
- IdentityViolationError → mismatch
- BudgetExceededError → aborted, with the largest block processed
"""

import json
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from cache import get_result_cache
from constants import (
    MATRIX_ALGEBRAS,
    MAX_SOLVER_M,
    AlgebraName,
    Command,
    ReportStatus,
    Verdict,
    ZooAction,
)
from src.clifford import defect_ok, lemma4_defect
from src.config import InvalidConfigError, RunConfig
from src.fock import moment
from src.lie import LieSuperAlgebra
from src.linalg import BudgetExceededError
from src.poisson import basis_monomials, poisson_algebra, r_k_polynomial
from src.reports import Report, convention_hash, convention_record
from src.solver import (
    EXCEPTIONAL_RADIAL,
    InvariantBasis,
    check_invariant,
    conjecture6_report,
    find_exceptional_invariant,
    invariants,
    po_torus,
    r_k_family,
    radial_part,
    span_membership_witness,
)
from src.supercore import IdentityViolationError, SuperPoly, format_rat
from src.utils.logger import get_logger
from src.zoo import build_action, build_algebra, coadjoint_action, po_algebra

logger = get_logger(__name__)

UNCACHED_COMMANDS = (Command.ZOO.value, Command.SELFTEST.value)


def _proportionality(lhs: SuperPoly, rhs: SuperPoly) -> Optional[Fraction]:
    """λ with lhs = λ·rhs, or None; rhs must be nonzero."""
    key, c = next(iter(sorted(rhs.items())))
    factor = lhs.coefficient(key) / c
    return factor if lhs == rhs.scale(factor) else None


class PipelineRunner:
    """Runs one subcommand for a validated RunConfig"""

    def __init__(self, config: RunConfig):
        self.config = config

    # -- plumbing -----------------------------------------------------------

    def _conventions(self) -> Dict[str, Any]:
        cfg = self.config
        m = None if cfg.algebra in MATRIX_ALGEBRAS and cfg.command == Command.INVARIANTS.value else cfg.m
        if cfg.command == Command.VERIFY_STAR3.value:
            m = 2 * cfg.n
        return convention_record(m)

    def _report(self, status: str = ReportStatus.OK.value, **kwargs) -> Report:
        return Report(
            command=self.config.command,
            config=self.config.cache_payload(),
            conventions=self._conventions(),
            status=status,
            **kwargs,
        )

    def _handlers(self) -> Dict[str, Callable[[], Report]]:
        return {
            Command.VERIFY_LEMMA4.value: self.cmd_verify_lemma4,
            Command.VERIFY_STAR3.value: self.cmd_verify_star3,
            Command.INVARIANTS.value: self.cmd_invariants,
            Command.CONJECTURE6.value: self.cmd_conjecture6,
            Command.RADIAL.value: self.cmd_radial,
            Command.MEMBERSHIP.value: self.cmd_membership,
            Command.ZOO.value: self.cmd_zoo,
            Command.SELFTEST.value: self.cmd_selftest,
        }

    def run(self) -> Report:
        """Execute the configured command; never raises for bad input or budget breaches."""
        cfg = self.config
        start = time.perf_counter()
        logger.info(f"🔍 Starting {cfg.command}")
        cache = None
        cache_key = None
        try:
            if cfg.command not in UNCACHED_COMMANDS:
                cache = get_result_cache(cfg.cache_dir)
                cache_key = cache.key(cfg.cache_payload(), self._conventions())
                hit = cache.get(cache_key)
                if hit is not None:
                    return Report.from_json(hit)
            report = self._handlers()[cfg.command]()
        except BudgetExceededError as e:
            logger.warning(f"⚠️ {cfg.command} aborted: {e}")
            report = self._report(
                ReportStatus.ABORTED.value,
                message=str(e),
                results=[{"processed": e.processed, "largest_block": e.largest_block}],
            )
        except IdentityViolationError as e:
            logger.error(f"❌ {cfg.command} found a failing identity: {e}")
            return Report(
                command=cfg.command,
                config=cfg.cache_payload(),
                status=ReportStatus.MISMATCH.value,
                message=str(e),
            )
        except (InvalidConfigError, ValueError) as e:
            logger.error(f"❌ Invalid input for {cfg.command}: {e}")
            return Report(
                command=cfg.command,
                config=cfg.cache_payload(),
                status=ReportStatus.INVALID.value,
                message=str(e),
            )
        report.timing = {"seconds": round(time.perf_counter() - start, 3), "threads": cfg.threads}
        if cache is not None and report.status != ReportStatus.ABORTED.value:
            cache.put(cache_key, report.to_json())
        logger.info(f"✅ {cfg.command} completed with status {report.status}")
        return report

    # -- verify-lemma4 ------------------------------------------------------

    def cmd_verify_lemma4(self) -> Report:
        """Quantization defect of every pair of po(0|m) basis monomials."""
        m = self.config.m
        P = poisson_algebra(m)
        basis = [SuperPoly.monomial(P.table, key) for key in basis_monomials(m)]
        failures = []
        valuations = set()
        for f in basis:
            for g in basis:
                defect = lemma4_defect(f, g, P)
                v = defect.valuation()
                valuations.add(v)
                if not defect_ok(defect):
                    failures.append({"f": f.to_text(), "g": g.to_text(), "valuation": v})
        finite = [v for v in valuations if v is not None]
        result = {
            "m": m,
            "route": "theta" if m % 2 else "xi-eta",
            "pairs": len(basis) ** 2,
            "failures": len(failures),
            "min_valuation": min(finite) if finite else None,
        }
        status = ReportStatus.MISMATCH.value if failures else ReportStatus.OK.value
        return self._report(status, results=[result], witnesses=failures[:20])

    # -- verify-star3 -------------------------------------------------------

    def _star3_item(self, m: int, k: int, claimed: int) -> Dict[str, Any]:
        s_k = moment(m, k)
        target = r_k_polynomial(m, k).scale(Fraction(1, k))
        item: Dict[str, Any] = {"m": m, "k": k, "claimed_exponent": claimed}
        if not s_k:
            item.update(
                valuation=None, constant=None, proportional=not target, exponent_matches_claim=None, remainder_order=None
            )
            return item
        v = s_k.valuation()
        lowest = s_k.coefficient(v)
        higher = sorted(power for power, _ in s_k.items() if power > v)
        factor = _proportionality(lowest, target) if target else None
        item.update(
            valuation=v,
            constant=format_rat(factor) if factor is not None else None,
            proportional=factor is not None,
            exponent_matches_claim=v == claimed,
            remainder_order=higher[0] if higher else None,
            lowest=lowest.to_text(),
        )
        return item

    def cmd_verify_star3(self) -> Report:
        """
        Lowest component of str(Q(f)^k) against (1/k)∫f^k on po(0|2n)

        Proportionality is asserted; the measured ħ-exponent is compared with
        n and flagged, never asserted. The queertrace moments of po(0|2n−1)
        are reported alongside.
        """
        n, k_max = self.config.n, self.config.k
        results, flags = [], []
        for k in range(1, k_max + 1):
            item = self._star3_item(2 * n, k, n)
            item["route"] = "supertrace"
            results.append(item)
            if item["exponent_matches_claim"] is False:
                flags.append({"route": "supertrace", "k": k, "measured": item["valuation"], "claimed": n})
        for k in range(1, k_max + 1):
            item = self._star3_item(2 * n - 1, k, n)
            item["route"] = "queertrace"
            item["asserted"] = False
            results.append(item)
            if item["exponent_matches_claim"] is False:
                flags.append({"route": "queertrace", "k": k, "measured": item["valuation"], "claimed": n})
        proportional = all(r["proportional"] for r in results if r["route"] == "supertrace")
        status = ReportStatus.OK.value if proportional else ReportStatus.MISMATCH.value
        if flags:
            logger.warning(f"⚠️ Measured ħ-exponents differ from {n}: {flags}")
        return self._report(status, results=results, witnesses=[{"exponent_deviations": flags}] if flags else [])

    # -- invariants ---------------------------------------------------------

    def _algebra(self) -> LieSuperAlgebra:
        cfg = self.config
        if cfg.algebra not in MATRIX_ALGEBRAS and cfg.m > MAX_SOLVER_M and cfg.command != Command.ZOO.value:
            raise InvalidConfigError(f"The solver supports m <= {MAX_SOLVER_M}, got {cfg.m}")
        return build_algebra(cfg.algebra, cfg.m, cfg.n, cfg.deform_term)

    def cmd_invariants(self) -> Report:
        """Invariants in S^d of the selected module for d = 0..degree."""
        cfg = self.config
        g = self._algebra()
        action = build_action(g, cfg.resolved_module)
        chash = convention_hash(self._conventions())
        results: List[Dict[str, Any]] = []
        consistent = True
        for d in range(cfg.degree + 1):
            try:
                inv = invariants(action, d, cfg.weight_filter, cfg.threads, cfg.budget, chash)
            except BudgetExceededError as e:
                results.append({"degree": d, "aborted": True, "processed": e.processed, "largest_block": e.largest_block})
                return self._report(ReportStatus.ABORTED.value, results=results, message=str(e))
            checked = all(check_invariant(p, action) for p in inv.basis)
            consistent = consistent and checked
            entry = inv.to_json()
            entry["self_consistent"] = checked
            results.append(entry)
        dims = [r["dim"] for r in results]
        status = ReportStatus.OK.value if consistent else ReportStatus.MISMATCH.value
        witnesses: List[Dict[str, Any]] = []
        if cfg.algebra == AlgebraName.VECT.value and cfg.m > 2 and consistent:
            # vect(0|m), m > 2: only constants
            if any(dims[1:]):
                status = ReportStatus.MISMATCH.value
        elif cfg.algebra in (AlgebraName.SVECT.value, AlgebraName.SVECT_TILDE.value) and consistent:
            verdict = Verdict.VIOLATING if any(dims[1:]) else Verdict.CONSISTENT
            witnesses.append({"verdict": verdict.value})
            status = ReportStatus.REPORT_ONLY.value
        elif cfg.algebra == AlgebraName.VECT.value and consistent:
            status = ReportStatus.REPORT_ONLY.value
        logger.info(f"📊 {g.name} {action.kind} invariant dims: {dims}")
        return self._report(status, results=results, witnesses=witnesses)

    # -- conjecture6 --------------------------------------------------------

    def cmd_conjecture6(self) -> Report:
        cfg = self.config
        if cfg.m > MAX_SOLVER_M:
            raise InvalidConfigError(f"conjecture6 supports m <= {MAX_SOLVER_M}, got {cfg.m}")
        chash = convention_hash(self._conventions())
        report = conjecture6_report(cfg.m, cfg.degree, cfg.budget, cfg.threads, chash)
        witnesses = []
        results = []
        for row in report["degrees"]:
            row = dict(row)
            if "witnesses" in row:
                witnesses.append({"degree": row["degree"], "lowest_components": row.pop("witnesses")})
            results.append(row)
        return self._report(report["status"], results=results, witnesses=witnesses)

    # -- radial / membership ------------------------------------------------

    def _require_even_po(self) -> None:
        m = self.config.m
        if m % 2 or m == 0:
            raise InvalidConfigError(f"Radial coordinates need a positive even m, got {m}")
        if m > MAX_SOLVER_M:
            raise InvalidConfigError(f"The solver supports m <= {MAX_SOLVER_M}, got {m}")

    def _exceptional(self, inv: InvariantBasis) -> Optional[Tuple[SuperPoly, Dict[str, Any]]]:
        """
        A degree-d invariant of po(0|4) whose radial part is x₁²x₂²(x₁² ∓ x₂²) modulo
        radial parts of products of r_1..r_d, with its witness record
        """
        torus = po_torus(4)
        found = find_exceptional_invariant(inv, torus, r_k_family(4, inv.degree))
        if found is None:
            return None
        exceptional, label = found
        witness: Dict[str, Any] = {
            "exceptional": exceptional.to_text(),
            "radial": radial_part(exceptional, torus).to_text(),
            "matched_target": label,
            "modulo": "radial parts of products of r_k",
        }
        if label != EXCEPTIONAL_RADIAL:
            witness["sign_deviation"] = f"{EXCEPTIONAL_RADIAL} matches after x2 -> i*x2 under the calibrated bracket"
            logger.warning(f"⚠️ Exceptional radial part matched as {label}")
        return exceptional, witness

    def _po4_invariants(self, d: int) -> InvariantBasis:
        cfg = self.config
        action = coadjoint_action(po_algebra(4))
        return invariants(action, d, cfg.weight_filter, cfg.threads, cfg.budget, convention_hash(self._conventions()))

    def cmd_radial(self) -> Report:
        """
        Radial parts of r_1..r_k and of the degree-d invariants of po(0|m);
        for m = 4, d = 6 an invariant with radial part x₁²x₂²(x₁² ∓ x₂²) modulo the
        radial parts of products of r_k must exist
        """
        self._require_even_po()
        cfg = self.config
        torus = po_torus(cfg.m)
        results: List[Dict[str, Any]] = []
        for k, r in enumerate(r_k_family(cfg.m, cfg.k), start=1):
            results.append({"polynomial": f"r{k}", "radial": radial_part(r, torus).to_text()})
        status = ReportStatus.OK.value
        witnesses = []
        if cfg.degree:
            action = coadjoint_action(po_algebra(cfg.m))
            inv = invariants(action, cfg.degree, cfg.weight_filter, cfg.threads, cfg.budget, convention_hash(self._conventions()))
            for i, p in enumerate(inv.basis):
                results.append({"polynomial": f"invariant{i}", "degree": cfg.degree, "radial": radial_part(p, torus).to_text()})
            if cfg.m == 4 and cfg.degree == 6:
                found = self._exceptional(inv)
                if found is None:
                    status = ReportStatus.MISMATCH.value
                else:
                    witnesses.append(found[1])
        return self._report(status, results=results, witnesses=witnesses)

    def cmd_membership(self) -> Report:
        """
        exceptional: the exceptional invariant of po(0|4) against {r_1..r_d}
        (expected outside); rk-power: r_k^{d/k} against {r_k} (expected inside)
        """
        cfg = self.config
        d = cfg.degree
        if cfg.candidate == "exceptional":
            if cfg.m != 4:
                raise InvalidConfigError(f"The exceptional candidate lives on po(0|4), got m={cfg.m}")
            found = self._exceptional(self._po4_invariants(d))
            if found is None:
                return self._report(
                    ReportStatus.MISMATCH.value,
                    results=[{"candidate": "exceptional", "degree": d, "found": False}],
                )
            candidate, exceptional_witness = found
            generators = r_k_family(4, d)
            expected = False
            label = "exceptional"
        else:
            self._require_even_po()
            k = cfg.k
            if d % k:
                raise InvalidConfigError(f"--degree {d} is not a multiple of --k {k}")
            r = r_k_polynomial(cfg.m, k)
            candidate = r ** (d // k)
            generators = [r]
            expected = True
            label = f"r{k}^{d // k}"
        witness = span_membership_witness(candidate, generators, d)
        member = witness is not None
        result = {"candidate": label, "degree": d, "generators": len(generators), "member": member, "expected": expected}
        witnesses = []
        if cfg.candidate == "exceptional":
            witnesses.append(exceptional_witness)
        if witness:
            witnesses.append({"combination": {json.dumps(list(c)): format_rat(v) for c, v in sorted(witness.items())}})
        status = ReportStatus.OK.value if member == expected else ReportStatus.MISMATCH.value
        return self._report(status, results=[result], witnesses=witnesses)

    # -- zoo ----------------------------------------------------------------

    def cmd_zoo(self) -> Report:
        if self.config.zoo_action == ZooAction.IMPORT.value:
            return self.cmd_zoo_import()
        return self.cmd_zoo_export()

    def cmd_zoo_export(self) -> Report:
        """Structure constants in the exchange format; written to --path when given."""
        g = self._algebra()
        payload = g.to_json()
        if self.config.path:
            with open(self.config.path, "w", encoding="utf-8") as f:
                json.dump(payload, f, sort_keys=True, indent=2)
            logger.info(f"💾 Wrote {g.name} to {self.config.path}")
        even, odd = g.sdim
        return self._report(
            results=[{"algebra": g.name, "dim": g.dim, "sdim": f"{even}|{odd}", "fingerprint": g.fingerprint(), "payload": payload}]
        )

    def cmd_zoo_import(self) -> Report:
        """
        Read and validate an algebra

        Raises:
            InvalidConfigError: If no --path is given
            ValueError: If the payload is malformed or fails validation
        """
        if not self.config.path:
            raise InvalidConfigError("zoo import needs --path")
        try:
            with open(self.config.path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidConfigError(f"Cannot read {self.config.path}: {e}") from e
        g = LieSuperAlgebra.from_json(data)
        g.validate()
        even, odd = g.sdim
        return self._report(
            results=[{"algebra": g.name, "dim": g.dim, "sdim": f"{even}|{odd}", "fingerprint": g.fingerprint()}]
        )

    # -- selftest -----------------------------------------------------------

    SELFTEST_CASES = (
        {"command": "verify-lemma4", "m": 2},
        {"command": "verify-lemma4", "m": 3},
        {"command": "verify-star3", "n": 1, "k": 2},
        {"command": "invariants", "algebra": "po", "m": 2, "degree": 2},
        {"command": "invariants", "algebra": "gl", "n": 1, "degree": 1},
        {"command": "invariants", "algebra": "vect", "m": 3, "degree": 1},
        {"command": "conjecture6", "m": 2, "degree": 3},
        {"command": "membership", "candidate": "rk-power", "m": 2, "k": 1, "degree": 2},
        {"command": "radial", "m": 4, "k": 2, "degree": 0},
    )

    def cmd_selftest(self) -> Report:
        """Small instance of every pipeline; ok iff each one is ok or report-only."""
        base = self.config
        results = []
        status = ReportStatus.OK.value
        for case in self.SELFTEST_CASES:
            cfg = RunConfig(
                cache_dir=base.cache_dir, threads=base.threads, seed=base.seed, budget=base.budget, **case
            ).validate()
            sub = PipelineRunner(cfg)._handlers()[cfg.command]()
            results.append({"case": case, "status": sub.status})
            if sub.status not in (ReportStatus.OK.value, ReportStatus.REPORT_ONLY.value):
                status = ReportStatus.MISMATCH.value
        return self._report(status, results=results)
