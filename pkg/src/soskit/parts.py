"""Body part vocabulary shared across the whole package.

The staff column order is fixed: root facing, left arm, left leg,
right leg, right arm, spine.
"""

PARTS = ("RT", "LA", "LL", "RL", "RA", "SP")
PART_INDEX = {name: i for i, name in enumerate(PARTS)}

# Skeleton roles required by the feature extractor.
ROLES = (
    "pelvis",
    "head",
    "left_shoulder",
    "right_shoulder",
    "left_wrist",
    "right_wrist",
    "left_hip",
    "right_hip",
    "left_ankle",
    "right_ankle",
)

# (end joint role, anchor joint role) per limb part; RT is derived from the
# reference frame instead of a joint pair.
LIMB_PAIRS = {
    "LA": ("left_wrist", "left_shoulder"),
    "LL": ("left_ankle", "left_hip"),
    "RL": ("right_ankle", "right_hip"),
    "RA": ("right_wrist", "right_shoulder"),
    "SP": ("head", "pelvis"),
}
