from entrobound.cli import main

raise SystemExit(main())
