import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sccheck import Scc


@pytest.fixture(scope="session")
def rules23():
    """The built-in rules at two voters, three alternatives."""
    return {
        "constant": Scc.constant(2, 3, 0),
        "dictatorial": Scc.dictatorial(2, 3, 0),
        "omninomination": Scc.omninomination(2, 3),
        "plurality-ties": Scc.plurality_ties(2, 3),
        "borda-set": Scc.borda_set(2, 3),
        "pareto-set": Scc.pareto_set(2, 3),
    }
