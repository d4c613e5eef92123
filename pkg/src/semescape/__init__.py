"""semescape: escape-set analysis for finitely generated semigroups of entire maps."""

from .errors import (
    EmptySet,
    InvalidConfig,
    LimitExceeded,
    NotStructured,
    UnboundedSingularSet,
    UnknownScenario,
)
from .maps import (
    OVERFLOW,
    Affine,
    Conjugated,
    EntireMap,
    ExpAffine,
    IterTranslate,
    SineAffine,
    derivative,
    eval_map,
    is_bounded_type,
    is_overflow,
    map_from_dict,
    map_from_json,
    map_to_dict,
    map_to_json,
    period,
    singular_values,
)
from .words import (
    NormalForm,
    PeriodicTranslate,
    Semigroup,
    enumerate_words,
    eval_normal_form,
    eval_word,
    normal_form,
    periodic_translate_semigroup,
    semigroup_from_dict,
    semigroup_to_dict,
    word_singular_set,
)
from .escape import (
    ALL_ESCAPE,
    BOUNDED,
    Budget,
    CODE_BND,
    CODE_ESC,
    CODE_UND,
    ESCAPED,
    OrbitRecord,
    Raster,
    SOME_BOUNDED,
    SemigroupClass,
    UNDETERMINED,
    classify_branches,
    classify_branches_batch,
    classify_orbit,
    classify_orbit_grid,
    compute_grid,
    forward_invariance_check,
    orbit_points,
    raster_from_dict,
    raster_from_json,
    raster_to_dict,
    raster_to_json,
)
from .postsingular import (
    PostsingularVerdict,
    Preperiodicity,
    detect_preperiodicity,
    is_hyperbolic_proxy,
    is_postsingularly_finite_proxy,
    postsingular_translation_check,
    singular_orbits,
)
from .topology import (
    ComponentInfo,
    ComponentSet,
    boundary,
    connected_components,
    dilate,
    hausdorff_px,
    unbounded_proxy,
)
from .conjugacy import conjugate_map, conjugate_semigroup, equivariance_check
from .render import render, raster_figure
from .scenarios import SCENARIOS, ScenarioReport, run_scenario, run_scenarios

__version__ = "0.1.0"
