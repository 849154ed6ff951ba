from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Solver
    stride_delta_y: int = 7
    pinv_rcond: float = 1e-10
    editer_max_clusters: int = 10
    kmeans_seed: int = 0
    kmeans_n_init: int = 10
    silhouette_floor: float = 0.2

    # Preprocessing and metrics
    whitening_ridge_scale: float = 1e-12
    saturation_eps: float = 1e-12
    mask_threshold_frac: float = 0.1

    # Simulator timing and amplitudes
    dwell_time_s: float = 1e-5
    tr_s: float = 0.05
    te_s: float = 0.007238
    fov_mm: float = 256.0
    emi_amplitude: float = 5.0
    emi_offset_hz: float = 12_500.0
    sigma_img: float = 0.05
    sigma_emi: float = 0.05
    noise_scan_samples: int = 2048

    # Runtime
    workers: int = 4
    log_level: str = "INFO"

    model_config = {"env_prefix": "EMICLEAN_", "env_file": ".env", "env_file_encoding": "utf-8", "extra": "ignore"}


settings = Settings()
