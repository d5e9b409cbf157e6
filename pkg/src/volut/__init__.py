# volut: finite volutive categories and their checkers
