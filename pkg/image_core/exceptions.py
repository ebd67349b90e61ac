"""Exception hierarchy shared by the raster, filter and CLI layers."""


class QuarterFilterException(Exception):
    pass


class ImageIOException(QuarterFilterException):
    pass


class ImageReadException(ImageIOException):
    pass


class ImageWriteException(ImageIOException):
    pass


class UnsupportedImageFormatException(ImageIOException):
    pass


class ImageProcessingException(QuarterFilterException):
    pass


class DimensionMismatchException(ImageProcessingException):
    pass


class InvalidParameterException(ImageProcessingException, ValueError):
    pass
