from .builtin import builtin_system, complete_zis3, zis3_augmentation_pool
from .system import ConeSystem, SystemCase, dump_system, instantiate, load_system, parse_system
from .uv import UVSolution, solve_uv
from .verifier import (
    CriticalG,
    FeasibilityCertificate,
    LemmaReport,
    RaySet,
    VertexCertificate,
    cone_meets_hyperplane,
    critical_g,
    extreme_rays,
    extremal_vertex,
    reconcile_encodings,
    resolve_zis3,
    verify_lemma,
)

__all__ = [
    "ConeSystem",
    "CriticalG",
    "FeasibilityCertificate",
    "LemmaReport",
    "RaySet",
    "VertexCertificate",
    "SystemCase",
    "UVSolution",
    "builtin_system",
    "complete_zis3",
    "cone_meets_hyperplane",
    "critical_g",
    "dump_system",
    "extremal_vertex",
    "extreme_rays",
    "instantiate",
    "load_system",
    "parse_system",
    "reconcile_encodings",
    "resolve_zis3",
    "solve_uv",
    "verify_lemma",
    "zis3_augmentation_pool",
]
