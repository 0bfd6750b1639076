"""Colorful fractional Helly bounds for d-collapsible complexes."""

from .bounds import (
    PParams,
    alpha_k,
    alpha_monte_carlo,
    beta_bfmop,
    beta_kim,
    beta_optimal,
    density_p,
    enumerate_P,
    kim_bound,
    p_closed_form,
    verify_cfh,
    verify_kim,
    verify_tckp,
)
from .campaign import CampaignConfig, CampaignReport, enumerate_collapsible, run_campaign
from .collapse import (
    BudgetExhausted,
    CollapseSequence,
    CollapseStep,
    NotCollapsible,
    boost,
    boost_witness,
    elementary_collapse,
    find_collapse,
    find_special_collapse,
    replay,
    split_vertex,
    split_witness,
)
from .complex import ColoredComplex
from .exterior import BlockBasis, CertificateReport, MultiVector, certificate, generic_block_basis, interior, wedge
from .extremal import ExtremalSpec, build_extremal, check_tightness
from .geometry import ConvexBody, GeometricFamily, feasible, nerve, realize_extremal

__all__ = [
    "BlockBasis",
    "BudgetExhausted",
    "CampaignConfig",
    "CampaignReport",
    "CertificateReport",
    "CollapseSequence",
    "CollapseStep",
    "ColoredComplex",
    "ConvexBody",
    "ExtremalSpec",
    "GeometricFamily",
    "MultiVector",
    "NotCollapsible",
    "PParams",
    "alpha_k",
    "alpha_monte_carlo",
    "beta_bfmop",
    "beta_kim",
    "beta_optimal",
    "boost",
    "boost_witness",
    "build_extremal",
    "certificate",
    "check_tightness",
    "density_p",
    "elementary_collapse",
    "enumerate_P",
    "enumerate_collapsible",
    "feasible",
    "find_collapse",
    "find_special_collapse",
    "generic_block_basis",
    "interior",
    "kim_bound",
    "nerve",
    "p_closed_form",
    "realize_extremal",
    "replay",
    "run_campaign",
    "split_vertex",
    "split_witness",
    "verify_cfh",
    "verify_kim",
    "verify_tckp",
    "wedge",
]
