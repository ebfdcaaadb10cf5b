"""Run manifests for constructions: one JSON document per run directory."""
from __future__ import annotations

from pathlib import Path
from typing import Any

from loguru import logger

from hurwitz import config
from hurwitz.constructions.schedules import (
    ScheduleMode,
    ScheduleOx2,
    ScheduleTau,
    schedule_build,
    schedule_build_tau,
)
from hurwitz.constructions.schemas import manifest_schema, validate_document
from hurwitz.constructions.tree import Assertion, CantorMeasure, LambdaFamily, Status
from hurwitz.dimension import reference_values
from hurwitz.exceptions import Infeasible, PreconditionViolated
from hurwitz.utils.datetime import now
from hurwitz.utils.files import write_json


def strict_feasibility(schedule: ScheduleOx2 | ScheduleTau) -> Assertion:
    """Whether the strict schedule for the same rate fits under `config.MAX_BITS`."""
    if schedule.mode is ScheduleMode.STRICT:
        return Assertion(name="strict_schedule", k=schedule.depth, status=Status.CERTIFIED)
    try:
        if isinstance(schedule, ScheduleTau):
            schedule_build_tau(schedule.rate, schedule.depth, ScheduleMode.STRICT)
        else:
            overrides = {"c1": str(schedule.c1)} if schedule.c1 is not None else {}
            schedule_build(
                schedule.rate, schedule.epsilon, schedule.depth, ScheduleMode.STRICT, overrides
            )
    except Infeasible as exc:
        return Assertion(
            name="strict_schedule", k=schedule.depth, status=Status.INFEASIBLE, detail=str(exc)
        )
    except PreconditionViolated as exc:
        return Assertion(
            name="strict_schedule", k=schedule.depth, status=Status.OUT_OF_RANGE, detail=str(exc)
        )
    return Assertion(name="strict_schedule", k=schedule.depth, status=Status.CERTIFIED)


def _condition_assertions(schedule: ScheduleOx2 | ScheduleTau) -> list[Assertion]:
    return [
        Assertion(
            name=f"schedule_{c.name}",
            k=c.k,
            status=Status.CERTIFIED if c.holds else Status.OUT_OF_RANGE,
            checked=1,
            failures=0 if c.holds else 1,
            detail=c.detail,
        )
        for c in schedule.conditions
    ]


def build_manifest(
    family: LambdaFamily,
    measure: CantorMeasure,
    seed: int,
    extra: list[Assertion] | None = None,
    run_config: dict[str, Any] | None = None,
) -> dict:
    schedule = family.schedule
    assertions = [
        *_condition_assertions(schedule),
        strict_feasibility(schedule),
        *family.assertions,
        *(extra or []),
    ]
    document = {
        "kind": family.construction,
        "version": config.VERSION,
        "created_at": now().isoformat(),
        "rate": str(schedule.rate),
        "seed": seed,
        "depth": family.depth,
        "schedule": schedule.to_document(),
        "family_sizes": family.family_sizes(),
        "assertions": [a.to_document() for a in assertions],
        "deviations": list(schedule.deviations),
        "config": {
            **{key: str(value) for key, value in config.CONFIG.dict().items()},
            **(run_config or {}),
        },
        "references": reference_values(schedule.rate),
        "measure": measure.to_document(),
    }
    return validate_document(manifest_schema, document)


def failed_assertions(manifest: dict) -> list[dict]:
    return [a for a in manifest["assertions"] if a["status"] == Status.FAILED.value]


def write_run(run_dir: str | Path, family: LambdaFamily, manifest: dict) -> Path:
    run_dir = Path(run_dir)
    family.write(run_dir / config.FAMILIES_NAME)
    path = write_json(run_dir / config.MANIFEST_NAME, manifest)
    logger.info(
        f"Run written to {run_dir}: {len(family.nodes)} nodes, "
        f"{len(manifest['assertions'])} assertions"
    )
    return path
