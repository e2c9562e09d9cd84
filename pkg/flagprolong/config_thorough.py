import os
from fractions import Fraction

# Profil dokładny: pełne sprawdzenia po każdym stopniu
JACOBI_MAX_DIM = int(os.getenv("FLAGPROLONG_JACOBI_MAX_DIM", "120"))
VERIFY_DETERMINACY = os.getenv("FLAGPROLONG_VERIFY_DETERMINACY", "true").lower() in ("true", "1", "yes")
SAMPLE_STEP = Fraction(os.getenv("FLAGPROLONG_SAMPLE_STEP", "1/7"))
