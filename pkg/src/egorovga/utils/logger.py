import logging

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


class LoggerFactory:
    @staticmethod
    def create_logger(name):
        logger = logging.getLogger(name)
        if not logger.handlers and not logging.getLogger().handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            logger.addHandler(handler)
            logger.propagate = False
        return logger

    @staticmethod
    def setup_logging(level=logging.INFO, rich=False, format=None):
        handlers = None
        if rich:
            from rich.logging import RichHandler

            handlers = [RichHandler(show_path=False, markup=False)]
        logging.basicConfig(
            level=level,
            format=format or ("%(name)s: %(message)s" if rich else LOG_FORMAT),
            handlers=handlers,
            force=True,
        )
        for name in list(logging.root.manager.loggerDict):
            if name.startswith("src.egorovga") or name.startswith("egorovga"):
                logger = logging.getLogger(name)
                logger.handlers.clear()
                logger.propagate = True
