"""sumcore: combinatorial search and certification for sumset/productset
structure in finite integer windows and finite groups."""

from .cover import (
    CoverCertificate,
    Infeasible,
    counting_lower_bound,
    min_translate_cover,
    verify_cover,
)
from .density import (
    DensityReport,
    GoodPoint,
    PartitionCertificate,
    banach_density,
    density_schedule,
    find_regular_point,
    min_window_density,
    verify_density_certificate,
    verify_good_point,
)
from .errors import (
    BadAlpha,
    BadBounds,
    BadCore,
    BadInterval,
    ElementOutOfRange,
    InvalidInput,
    ModelMismatch,
    NotALatinSquare,
    ParseError,
    SpecOutOfRange,
    SumcoreError,
    WindowTooLarge,
)
from .ladder import LadderCertificate, LadderResult, max_ladder, verify_ladder
from .model import (
    CayleyGroup,
    DenseSet,
    ZWindow,
    build_model,
    cyclic_table,
    quotient,
    read_set_file,
    translate,
    write_set_file,
)
from .setspec import (
    Bernoulli,
    BohrSet,
    Complement,
    Explicit,
    FileSet,
    Intersect,
    Multiples,
    PowersOf2,
    Threshold,
    Translate,
    Union,
    generate_set,
    parse_set_spec,
    spec_to_text,
)
from .witness import (
    DefinableWitness,
    FamilyDescriptor,
    GrowthPoint,
    NotFound,
    SquareWitness,
    Stuck,
    TriangularWitness,
    UpgradeResult,
    definable_witness_search,
    find_square_witness,
    find_triangular_witness,
    greedy_back_and_forth,
    growth_curve,
    ramsey_upgrade,
    verify_definable_witness,
    verify_square_witness,
    verify_triangular_witness,
    verify_upgrade,
)

__version__ = "0.1.0"
