"""LSB steganography with an encrypted pixel locator sequence."""
from .crypto import PlsKeyFile, SealedPayload, from_hex, open_pls, seal, seal_pls, to_hex, unseal
from .errors import StegoError
from .image_model import ImageMatrix, Pixel, load_image, locate, save_image
from .kernels import BACKEND
from .metrics import QualityReport, compare_report, histogram, mse, psnr
from .pls import (
    PixelLocatorSequence,
    generate_pls,
    required_pixels,
    validate_pls,
    serialize_pls,
    deserialize_pls,
)
from .stego_codec import capacity, embed, extract, set_parity

__version__ = "0.1.0"
