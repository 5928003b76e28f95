"""Exact computation in confined semidirect products H x| Z: word
metrics and normal forms, four-point hyperbolicity certificates,
boundary invariants, tree actions and fiber products."""

from .boundary import (
    ActionVerdict,
    IsometryType,
    QuasicharacterEstimate,
    TranslationReport,
    action_type,
    busemann_quasicharacter,
    horokernel,
    isometry_type,
    schottky_semigroup_check,
    translation_number,
)
from .families import (
    FamilyError,
    LamplighterFamily,
    LamplighterWindow,
    NadicFamily,
    NadicWindow,
    ProductFamily,
    SpoofIdentityFamily,
    family_from_config,
    verify_confining,
)
from .metric import (
    DistanceMatrix,
    DeltaReport,
    QIReport,
    delta_within_bound,
    four_point_delta,
    gromov_product,
    hyperbolicity_bound,
    qi_embedding_check,
)
from .trees import (
    BusemannGraph,
    TreeVertex,
    lamplighter_tree_ball,
    millefeuille,
    regular_tree_ball,
    tree_act,
    tree_distance,
    tree_qi_probe,
    tree_transitivity_witness,
)
from .words import (
    ALPHA,
    ALPHA_INV,
    Gen,
    GroupPoint,
    NormalForm,
    alpha_point,
    ball_points,
    bfs_oracle,
    distortion_check,
    evaluate,
    geodesic_witness,
    h_point,
    identity_point,
    k0_bound,
    parse_word,
    rewrite_to_normal_form,
    word_length,
)

__version__ = "0.1.0"
