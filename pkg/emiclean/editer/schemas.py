import enum

from pydantic import BaseModel, Field, model_validator

from emiclean.config import settings


class EditerVariant(str, enum.Enum):
    A = "A"  # one PE line per temporal group
    B = "B"  # k-means temporal groups


# (delta_kx, delta_ky) per variant
_VARIANT_WINDOWS = {
    EditerVariant.A: (1, 7),
    EditerVariant.B: (1, 1),
}


class EditerConfig(BaseModel):
    variant: EditerVariant = EditerVariant.B
    delta_kx: int | None = Field(default=None, ge=1)
    delta_ky: int | None = Field(default=None, ge=1)
    max_clusters: int = Field(default_factory=lambda: settings.editer_max_clusters, ge=1)
    seed: int = Field(default_factory=lambda: settings.kmeans_seed)
    rcond: float = Field(default_factory=lambda: settings.pinv_rcond, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def fill_variant_defaults(self) -> "EditerConfig":
        """Unset shift windows take the variant's defaults; windows must be odd to stay centered."""
        default_kx, default_ky = _VARIANT_WINDOWS[self.variant]
        if self.delta_kx is None:
            self.delta_kx = default_kx
        if self.delta_ky is None:
            self.delta_ky = default_ky
        if self.delta_kx % 2 == 0 or self.delta_ky % 2 == 0:
            raise ValueError(f"shift windows must be odd, got delta_kx={self.delta_kx}, delta_ky={self.delta_ky}")
        return self
