from pydantic import BaseModel, Field


class WelchResult(BaseModel):
    t: float
    dof: float
    p_value: float = Field(ge=0.0, le=1.0)


class MetricSummary(BaseModel):
    """One metrics.csv row. ``run`` is the run directory name and is unique per evaluation."""

    run: str
    method: str
    scenario: str
    mean_snr: float
    mean_removal_pct: float
    rmse_total: float


class TTestRow(BaseModel):
    """One ttest.csv row: run_a against run_b on a masked voxelwise metric."""

    scenario: str
    metric: str
    run_a: str
    run_b: str
    method_a: str
    method_b: str
    t: float
    dof: float
    p_value: float
