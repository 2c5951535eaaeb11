from ruijsenaars.errors import DomainError
from ruijsenaars.functions.evaluators import (
    eval_hyp_gamma, eval_cgamma, eval_f_master, eval_phi_hyp, eval_f_cm_hyp,
    eval_f_complex_barnes, eval_f_complex_euler, eval_weight, eval_hamiltonian,
)


def get_function(name):
    _functions = {
        "hyp-gamma": eval_hyp_gamma,
        "cgamma": eval_cgamma,
        "f-master": eval_f_master,
        "phi-hyp": eval_phi_hyp,
        "f-cm-hyp": eval_f_cm_hyp,
        "f-complex-barnes": eval_f_complex_barnes,
        "f-complex-euler": eval_f_complex_euler,
        "weight": eval_weight,
        "hamiltonian-apply": eval_hamiltonian,
    }
    if name not in _functions:
        raise DomainError("unknown function '{}', expected one of {}".format(name, ", ".join(sorted(_functions))))
    return _functions[name]
