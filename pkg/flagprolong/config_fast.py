import os
from fractions import Fraction

# Profil szybki: Jacobi tylko dla małych algebr, bez kontroli determinacji
JACOBI_MAX_DIM = int(os.getenv("FLAGPROLONG_JACOBI_MAX_DIM", "40"))
VERIFY_DETERMINACY = os.getenv("FLAGPROLONG_VERIFY_DETERMINACY", "false").lower() in ("true", "1", "yes")
SAMPLE_STEP = Fraction(os.getenv("FLAGPROLONG_SAMPLE_STEP", "1/3"))
