import os
from dotenv import load_dotenv

# Chargement des variables d'environnement
load_dotenv()

# Répertoires
DATA_DIR = os.getenv('LIE2_DATA_DIR', 'data')
FIXTURES_DIR = os.getenv('LIE2_FIXTURES_DIR', 'fixtures')

# Niveau de log
LOG_LEVEL = os.getenv('LIE2_LOG_LEVEL', 'INFO')

# Échantillonnage déterministe
DEFAULT_SEED = int(os.getenv('LIE2_SEED', 0))
DEFAULT_PAIR_SAMPLES = int(os.getenv('LIE2_PAIR_SAMPLES', 64))
DEFAULT_GROUP_SAMPLES = int(os.getenv('LIE2_GROUP_SAMPLES', 32))

# Vérifications exhaustives (au-delà : tirage aléatoire)
EXHAUSTIVE_ORDER_CAP = int(os.getenv('LIE2_EXHAUSTIVE_ORDER_CAP', 64))
RANDOM_PAIR_SAMPLES = int(os.getenv('LIE2_RANDOM_PAIR_SAMPLES', 4096))
MIDDLE_FOUR_EXHAUSTIVE_ARROWS = int(os.getenv('LIE2_MIDDLE_FOUR_EXHAUSTIVE_ARROWS', 36))
MIDDLE_FOUR_EXHAUSTIVE_PAIRS = int(os.getenv('LIE2_MIDDLE_FOUR_EXHAUSTIVE_PAIRS', 64))
MIDDLE_FOUR_SAMPLES = int(os.getenv('LIE2_MIDDLE_FOUR_SAMPLES', 256))
MAX_WITNESSES = 5

# Énumération de Aut(K)
AUT_CAP = int(os.getenv('LIE2_AUT_CAP', 1000))

# Différences finies
FD_STEP = float(os.getenv('LIE2_FD_STEP', 1e-5))
RICHARDSON_RTOL = float(os.getenv('LIE2_RICHARDSON_RTOL', 1e-5))
EXPM_NORM_LIMIT = 700.0

# Exécution parallèle des lois
MAX_WORKERS = int(os.getenv('LIE2_MAX_WORKERS', 4))

# Seuils de résidus (surchargés par le champ "tolerances" des fixtures)
DEFAULT_TOLERANCES = {
    'closed_form': 1e-10,
    'one_derivative': 1e-8,
    'two_derivatives': 1e-5,
    'membership': 1e-9,
    'tangent_chart': 1e-7,
    'multiplicative': 1e-6,
    'bracket': 1e-4,
    'invariance': 1e-6,
    'invariance_strict': 1e-7,
    'reconstruction': 1e-5,
    'equivariance': 1e-4,
    'j_inversion': 1e-3,
    'control_min': 1e-2,
}
