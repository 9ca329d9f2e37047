# src/engine/verify/__init__.py
from src.engine.verify.bad_certificate import bad_certificate, fraction_convergents
from src.engine.verify.borel_cantelli import borel_cantelli_sum, series_theta
from src.engine.verify.cf_witness import cf_witness, convergents, plan_quotients, surgical_quotient
from src.engine.verify.diagonal import diagonal_embed
from src.engine.verify.proximity import (
    measure_closeness, proximity, proximity_constants, proximity_overlay,
)

__all__ = [
    "proximity", "proximity_constants", "measure_closeness", "proximity_overlay",
    "cf_witness", "plan_quotients", "surgical_quotient", "convergents",
    "bad_certificate", "fraction_convergents",
    "borel_cantelli_sum", "series_theta",
    "diagonal_embed",
]
