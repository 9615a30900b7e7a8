"""Visual verb sense disambiguation.

Given an image (its feature vector and/or textual annotations) paired with
a verb, select the verb sense depicted in the image by scoring candidate
senses against the image under a normalized dot product, over textual,
visual, or fused representations.
"""

from .cca import (
    CcaModel,
    fit_cca,
    fuse_concat,
    fuse_interpolate,
    load_cca_model,
    project,
    save_cca_model,
)
from .disambig import (
    DisambigResources,
    Disambiguator,
    Prediction,
    disambiguate,
    first_sense,
    lesk_overlap,
    most_frequent_sense,
    score_dot,
)
from .embeddings import EmbeddingTable, embed_text, load_embeddings, tokenize_content
from .errors import VerbsenseError
from .evaluation import EvalReport, accuracy, load_dataset, run_grid
from .features import (
    FeatureStore,
    load_manifest,
    mean_pool,
    read_feature_file,
    write_feature_file,
)
from .imagerep import (
    ImageRecord,
    RepConfig,
    build_text_image_rep,
    filter_pred_objects,
    visual_image_rep,
)
from .inventory import SenseEntry, SenseInventory, load_inventory, save_inventory, senses
from .senserep import SenseRepSet, build_text_sense_rep, build_visual_sense_rep
from .supervised import (
    LrModel,
    predict_lr,
    select_supervised_verbs,
    split_train_test,
    train_lr,
)

__version__ = "0.1.0"
