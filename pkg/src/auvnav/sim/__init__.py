"""Deterministic ground-truth world: dynamics, sensing, and canyon maps."""

from .dynamics import OMEGA_EPS, step
from .sensor import cast_rays, check_collision, disc_hits_cells, raycast_grid, traversed_cells
from .types import (BEAM_BEARINGS_DEG, BEAM_NAMES, FREE, OCCUPIED, AuvState,
                    Beam, ControlInput, SensorScan, SimConfig, WorldMap,
                    wrap_angle)
from .world import (CanyonParams, free_path_exists, generate_canyon, load_map,
                    map_from_dict, map_to_dict, rle_decode, rle_encode,
                    save_map)

__all__ = [
    "AuvState", "ControlInput", "SimConfig", "WorldMap", "SensorScan", "Beam",
    "BEAM_NAMES", "BEAM_BEARINGS_DEG", "FREE", "OCCUPIED", "OMEGA_EPS",
    "wrap_angle", "step", "cast_rays", "check_collision", "disc_hits_cells",
    "raycast_grid", "traversed_cells", "CanyonParams", "generate_canyon",
    "free_path_exists", "save_map", "load_map", "map_to_dict", "map_from_dict",
    "rle_encode", "rle_decode",
]
