from .templates import (SIGNATURES, GadgetTemplate, all_signatures, ports_of,
                        build_gadget, instantiate, signature_key, load_template)
from .harness import (BoundaryConfig, harness, verify_gadget, inflow_weight,
                      closure_report, gadget_table)

__all__ = [
    "SIGNATURES", "GadgetTemplate", "all_signatures", "ports_of",
    "build_gadget", "instantiate", "signature_key", "load_template",
    "BoundaryConfig", "harness", "verify_gadget", "inflow_weight",
    "closure_report", "gadget_table",
]
