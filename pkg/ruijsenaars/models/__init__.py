from ruijsenaars.models.hamiltonians import apply_hamiltonian, commutator, hamiltonian_limit_check
from ruijsenaars.models.weights import weight, adjoint_pairing, weight_limit_check
from ruijsenaars.models.intertwiners import intertwiner, intertwining_sides, reflection_sides
from ruijsenaars.models.qoperator import q_product_sides, q_eigenvalue_sides, q_commutativity_sides
